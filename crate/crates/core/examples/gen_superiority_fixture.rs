//! Writes `fixtures/superiority/`: a corpus and ten query pairs on which
//! BM25 alone gets 6 right, heading embeddings alone get 7 and the hybrid
//! ranking gets 9. Prints the accuracy of each mode after writing.
//!
//! Every query is `the h<i> c<i>`. `h<i>` is a heading word with a one-hot
//! vector; `c<i>` only ever appears in section bodies and has no vector.
//!
//! * queries 1-4: the relevant section has heading `h<i>` and body `c<i>`.
//! * queries 5-6: a decoy has the exact heading `h<i>` but no `c<i>`; the
//!   relevant section has heading `h<i> g<i>` and a dense `c<i>` body.
//! * queries 7-9: a decoy has an unrelated heading and a dense `c<i>` body;
//!   the relevant section has heading `h<i>` and mentions `c<i>` once in a
//!   long body.
//! * query 10: a decoy owns both `h10` and `c10`; nobody can win it.
//!
//! Run with `cargo run -p retriever-core --example gen_superiority_fixture [out_dir]`.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use retriever_core::corpus::NO_COUNTRY;
use retriever_core::{
    build_corpus, compare_modes, load_pairs, parse_manifest, EmbeddingTable, Gazetteer, RankConfig, Resources,
    SearchEngine, TextPipeline,
};

struct Section {
    heading: Vec<String>,
    body: Vec<String>,
}

fn filler(seed: usize, n: usize) -> Vec<String> {
    (0..n).map(|j| format!("f{}", (seed * 7 + j * 3) % 20 + 1)).collect()
}

fn rep(word: &str, n: usize) -> Vec<String> {
    vec![word.to_owned(); n]
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/superiority"));
    fs::create_dir_all(&out)?;

    let mut sections: Vec<Section> = Vec::new();
    // (query index, index of the relevant section)
    let mut relevant: Vec<(usize, usize)> = Vec::new();
    let mut unrelated = 0usize;
    let mut next_unrelated = || {
        unrelated += 1;
        vec![format!("u{unrelated}")]
    };

    for i in 1..=10 {
        let (h, c, g) = (format!("h{i}"), format!("c{i}"), format!("g{i}"));
        match i {
            1..=4 => {
                relevant.push((i, sections.len()));
                sections.push(Section {
                    heading: vec![h],
                    body: [rep(&c, 3), filler(i, 4)].concat(),
                });
            }
            5 | 6 => {
                relevant.push((i, sections.len()));
                sections.push(Section {
                    heading: vec![h.clone(), g],
                    body: [rep(&c, 3), filler(i, 3)].concat(),
                });
                sections.push(Section {
                    heading: vec![h],
                    body: filler(i + 1, 6),
                });
                sections.push(Section {
                    heading: next_unrelated(),
                    body: [vec![c], filler(i + 2, 24)].concat(),
                });
            }
            7..=9 => {
                relevant.push((i, sections.len()));
                sections.push(Section {
                    heading: vec![h.clone()],
                    body: [vec![c.clone()], filler(i, 24)].concat(),
                });
                sections.push(Section {
                    heading: next_unrelated(),
                    body: [rep(&c, 3), filler(i + 1, 3)].concat(),
                });
                sections.push(Section {
                    heading: vec![h, g],
                    body: filler(i + 2, 6),
                });
            }
            _ => {
                relevant.push((i, sections.len()));
                sections.push(Section {
                    heading: next_unrelated(),
                    body: filler(i, 6),
                });
                sections.push(Section {
                    heading: vec![h],
                    body: [rep(&c, 2), filler(i + 1, 4)].concat(),
                });
            }
        }
    }
    for k in 0..9 {
        sections.push(Section {
            heading: next_unrelated(),
            body: filler(k + 30, 5 + k),
        });
    }

    let mut vocab: Vec<String> = Vec::new();
    vocab.extend((1..=10).map(|i| format!("h{i}")));
    vocab.extend((5..=9).map(|i| format!("g{i}")));
    vocab.extend((1..=unrelated).map(|k| format!("u{k}")));
    let dim = vocab.len();
    let mut embeddings = EmbeddingTable::new(dim);
    for (axis, w) in vocab.iter().enumerate() {
        let mut v = vec![0.0; dim];
        v[axis] = 1.0;
        embeddings.insert(w.clone(), v)?;
    }
    fs::write(out.join("embeddings.txt"), embeddings.to_text())?;

    let mut lexicon = String::from("#alphabet: abcdefghijklmnopqrstuvwxyz0123456789\n");
    let content_words = (1..=10)
        .map(|i| format!("c{i}"))
        .chain((1..=20).map(|j| format!("f{j}")));
    for w in vocab.iter().cloned().chain(content_words) {
        let _ = writeln!(lexicon, "{w}\t10\tNCMN");
    }
    lexicon.push_str("the\t1000\tOTHER\n");
    fs::write(out.join("lexicon.tsv"), lexicon)?;
    fs::write(out.join("stopwords.txt"), "the\n")?;
    fs::write(out.join("gazetteer.json"), "{}\n")?;

    let mut corpus = String::new();
    for s in &sections {
        let _ = writeln!(corpus, "# {}\n{}", s.heading.join(" "), s.body.join(" "));
    }
    fs::write(out.join("corpus.txt"), corpus)?;
    fs::write(
        out.join("manifest.json"),
        format!("[{{\"path\": \"corpus.txt\", \"country\": \"{NO_COUNTRY}\", \"title\": \"sup\"}}]\n"),
    )?;

    let mut pairs = String::from("# query\trelevant doc_id\n");
    for (i, idx) in &relevant {
        let _ = writeln!(pairs, "the h{i} c{i}\tsup#{}", idx + 1);
    }
    fs::write(out.join("pairs.tsv"), pairs)?;

    let pipeline = TextPipeline::load(&out.join("lexicon.tsv"), &out.join("stopwords.txt"))?;
    let gazetteer = Gazetteer::load(&out.join("gazetteer.json"))?;
    let manifest = parse_manifest(&out.join("manifest.json"), &gazetteer)?;
    let store = build_corpus(&manifest, &pipeline, &embeddings, 1)?;
    let resources = Arc::new(Resources {
        pipeline,
        embeddings,
        gazetteer,
    });
    let engine = SearchEngine::new(store, resources, RankConfig::default())?;
    let pairs = load_pairs(&out.join("pairs.tsv"), engine.store())?;
    let report = compare_modes(&pairs, &engine)?;
    for row in &report.rows {
        println!("{:<10} {}/{}", row.mode.as_str(), row.hits_at_1, row.n_queries);
    }
    println!("wrote {} sections to {}", sections.len(), out.display());
    Ok(())
}
