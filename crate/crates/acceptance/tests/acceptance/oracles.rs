use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use anyhow::{bail, ensure, Result};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use retriever_core::{borda_aggregate, Bm25Index, Bm25Params, RankedEntry, RankedList};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

fn list(order: &[usize]) -> RankedList {
    RankedList::from_scores(
        order
            .iter()
            .enumerate()
            .map(|(pos, &d)| RankedEntry {
                doc_id: format!("d{d}"),
                score: (order.len() - pos) as f64,
            })
            .collect(),
    )
}

/// Expected (doc, points, heading rank, content rank) in fused order.
fn brute_force(heading: &[usize], content: &[usize]) -> Vec<(String, u64, usize, usize)> {
    let n = heading.len();
    let mut rows: Vec<(String, u64, usize, usize)> = (0..n)
        .map(|d| {
            let h = heading.iter().position(|&x| x == d).unwrap() + 1;
            let c = content.iter().position(|&x| x == d).unwrap() + 1;
            (format!("d{d}"), ((n - h) + (n - c)) as u64, h, c)
        })
        .collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)).then(a.0.cmp(&b.0)));
    rows
}

pub fn borda_oracle() -> Result<String> {
    let started = Instant::now();
    let mut cases = 0usize;
    for n in 1..=5 {
        let perms = permutations(n);
        let lists: Vec<RankedList> = perms.iter().map(|p| list(p)).collect();
        for (hp, hl) in perms.iter().zip(&lists) {
            for (cp, cl) in perms.iter().zip(&lists) {
                let fused = borda_aggregate(hl, cl)?;
                let expected = brute_force(hp, cp);
                ensure!(fused.len() == expected.len(), "n={n}: {} results", fused.len());
                for (i, (got, want)) in fused.iter().zip(&expected).enumerate() {
                    let got_row = (got.doc_id.clone(), got.borda_points, got.heading_rank, got.content_rank);
                    if got_row != *want || got.final_rank != i + 1 {
                        bail!(
                            "heading {hp:?} content {cp:?}: position {} is {got:?}, expected {want:?}",
                            i + 1
                        );
                    }
                }
                cases += 1;
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure!(cases == 1 + 4 + 36 + 576 + 14_400, "ran {cases} cases");
    ensure!(secs < 5.0, "took {secs:.2}s, limit 5s");
    Ok(format!("{cases} permutation pairs exact ({} at n=5)", 120 * 120))
}

/// Direct evaluation of the scoring formula: for each distinct query term,
/// ln((N - df + 0.5) / (df + 0.5) + 1) * tf (k1 + 1) / (tf + k1 (1 - b + b dl / avgdl)).
fn reference_scores(docs: &[Vec<String>], query: &[String], k1: f64, b: f64) -> Vec<f64> {
    let n = docs.len() as f64;
    let avgdl = docs.iter().map(Vec::len).sum::<usize>() as f64 / n;
    let terms: BTreeSet<&String> = query.iter().collect();
    docs.iter()
        .map(|doc| {
            let dl = doc.len() as f64;
            let mut score = 0.0;
            for term in &terms {
                let tf = doc.iter().filter(|t| t == term).count() as f64;
                if tf == 0.0 {
                    continue;
                }
                let df = docs.iter().filter(|d| d.contains(term)).count() as f64;
                let idf = ((n - df + 0.5) / (df + 0.5) + 1.0).ln();
                score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * dl / avgdl));
            }
            score
        })
        .collect()
}

pub fn bm25_oracle() -> Result<String> {
    const TOL: f64 = 1e-9;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB325);
    let params = Bm25Params::default();
    let mut compared = 0usize;
    let mut max_err = 0.0f64;

    for corpus_no in 0..200 {
        let vocab_size = rng.random_range(1..=6);
        let vocab: Vec<String> = (0..vocab_size).map(|i| format!("v{i}")).collect();
        let n_docs = rng.random_range(1..=8);
        let docs: Vec<Vec<String>> = (0..n_docs)
            .map(|_| {
                let len = rng.random_range(1..=12);
                (0..len).map(|_| vocab.choose(&mut rng).unwrap().clone()).collect()
            })
            .collect();
        let ids: Vec<String> = (0..n_docs).map(|i| format!("d{i}")).collect();
        let index = Bm25Index::build(ids.iter().cloned().zip(docs.iter()), params)?;

        for query_no in 0..20 {
            let len = rng.random_range(1..=4);
            // a term outside the vocabulary now and then
            let query: Vec<String> = (0..len)
                .map(|_| {
                    if rng.random_bool(0.1) {
                        "oov".to_owned()
                    } else {
                        vocab.choose(&mut rng).unwrap().clone()
                    }
                })
                .collect();
            let want = reference_scores(&docs, &query, params.k1, params.b);

            let mut got = BTreeMap::new();
            for (id, &w) in ids.iter().zip(&want) {
                let s = index.score(&query, id)?;
                let err = (s - w).abs();
                max_err = max_err.max(err);
                ensure!(
                    err <= TOL,
                    "corpus {corpus_no} query {query_no} {query:?} doc {id}: {s} vs reference {w}"
                );
                got.insert(id.clone(), s);
                compared += 1;
            }

            let mut expected_order: Vec<(&String, f64)> = ids.iter().zip(want.iter().copied()).collect();
            expected_order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(b.0)));
            let expected_order: Vec<&str> = expected_order.iter().map(|(id, _)| id.as_str()).collect();
            let ranked = index.rank(&query);
            let order: Vec<&str> = ranked.doc_ids().collect();
            ensure!(
                order == expected_order,
                "corpus {corpus_no} query {query:?}: ranking {order:?}, reference {expected_order:?}"
            );
        }
    }
    let secs = started.elapsed().as_secs_f64();
    ensure!(secs < 10.0, "took {secs:.2}s, limit 10s");
    Ok(format!(
        "4000 queries, {compared} scores, max |error| {max_err:.1e}, rankings identical"
    ))
}
