//! Seeded synthetic corpora for latency tests and benchmarks.
//!
//! Words are `w0000`, `w0001`, ... with random embedding vectors. Bodies draw
//! from a skewed word distribution so BM25 sees realistic posting lengths.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{process_section, CorpusStore, RawSection};
use crate::embedding::EmbeddingTable;
use crate::rank::{Gazetteer, Resources};
use crate::text::{LexEntry, Lexicon, PosTag, SpellCache, StopwordSet, TextPipeline};

const COUNTRIES: [&str; 4] = ["MM", "VN", "KH", "LA"];
const STOPWORDS: [&str; 4] = ["the", "of", "and", "in"];

#[derive(Debug, Clone, Copy)]
pub struct SyntheticSpec {
    pub n_docs: usize,
    pub vocab: usize,
    pub dim: usize,
    pub body_words: (usize, usize),
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_docs: 1000,
            vocab: 3000,
            dim: 300,
            body_words: (80, 240),
            seed: 7,
        }
    }
}

pub struct SyntheticCorpus {
    pub store: CorpusStore,
    pub resources: Arc<Resources>,
    /// Ready-made queries over the vocabulary (no country mentions).
    pub queries: Vec<String>,
}

fn word(i: usize) -> String {
    format!("w{i:04}")
}

/// Skewed draw: low word ids are much more common than high ones.
fn skewed(rng: &mut ChaCha8Rng, vocab: usize) -> usize {
    let u: f64 = rng.random();
    ((u * u * u) * vocab as f64) as usize % vocab
}

pub fn generate(spec: SyntheticSpec) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut entries: Vec<(String, LexEntry)> = (0..spec.vocab)
        .map(|i| {
            let entry = LexEntry {
                frequency: (spec.vocab - i) as u64,
                tag: if i % 7 == 3 { PosTag::Vact } else { PosTag::Ncmn },
            };
            (word(i), entry)
        })
        .collect();
    entries.extend(STOPWORDS.iter().map(|w| {
        (
            w.to_string(),
            LexEntry {
                frequency: 1_000_000,
                tag: PosTag::Prep,
            },
        )
    }));
    let alphabet = "w0123456789".chars().collect();
    let lexicon = Lexicon::new(entries, alphabet).expect("synthetic lexicon is valid");
    let pipeline = TextPipeline::new(lexicon, StopwordSet::new(STOPWORDS));

    let mut embeddings = EmbeddingTable::new(spec.dim);
    for i in 0..spec.vocab {
        let v = (0..spec.dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        embeddings.insert(word(i), v).expect("fresh word");
    }

    let gazetteer = Gazetteer::new(
        COUNTRIES
            .iter()
            .map(|c| (c.to_string(), vec![format!("country-{c}")]))
            .collect(),
    )
    .expect("distinct surface forms");

    let mut cache = SpellCache::new();
    let documents = (0..spec.n_docs)
        .map(|d| {
            let heading_len = rng.random_range(2..=5);
            let heading: Vec<String> = (0..heading_len)
                .map(|_| word(rng.random_range(0..spec.vocab)))
                .collect();
            let body_len = rng.random_range(spec.body_words.0..=spec.body_words.1);
            let body: Vec<String> = (0..body_len)
                .map(|j| {
                    if j % 9 == 4 {
                        STOPWORDS[j % STOPWORDS.len()].to_string()
                    } else {
                        word(skewed(&mut rng, spec.vocab))
                    }
                })
                .collect();
            let section = RawSection {
                doc_id: format!("synthetic#{}", d + 1),
                country: COUNTRIES[d % COUNTRIES.len()].to_string(),
                heading_text: heading.join(" "),
                heading_eol: "\n".into(),
                body_text: body.join(" "),
                uri: String::new(),
            };
            process_section(&section, &pipeline, &embeddings, &mut cache)
        })
        .collect();

    let queries = (0..200)
        .map(|_| {
            let n = rng.random_range(2..=4);
            let mut q: Vec<String> = (0..n).map(|_| word(skewed(&mut rng, spec.vocab))).collect();
            q.push("the".into());
            q.join(" ")
        })
        .collect();

    SyntheticCorpus {
        store: CorpusStore {
            version: 1,
            embedding_dim: spec.dim,
            build_timestamp: String::new(),
            documents,
            resources: None,
        },
        resources: Arc::new(Resources {
            pipeline,
            embeddings,
            gazetteer,
        }),
        queries,
    }
}
