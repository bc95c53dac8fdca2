//! Accuracy and latency per ranking mode over query → relevant-document
//! pairs.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::CorpusStore;
use crate::rank::{RankError, RankMode, SearchEngine};

/// Results fetched per query; accuracy@3 needs three.
const EVAL_DEPTH: usize = 3;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("pairs line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("pairs reference documents missing from the corpus: {}", .0.join(", "))]
    UnknownDoc(Vec<String>),
    #[error("no evaluation pairs")]
    EmptyEval,
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Rank(#[from] RankError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPair {
    pub query: String,
    pub relevant_doc_id: String,
}

/// Parses `query<TAB>doc_id` lines. Blank and `#` lines are skipped.
pub fn parse_pairs(source: &str, corpus: &CorpusStore) -> Result<Vec<EvalPair>, EvalError> {
    let mut pairs = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: &str| EvalError::Parse {
            line: idx + 1,
            message: message.to_owned(),
        };
        let (query, doc) = line
            .split_once('\t')
            .ok_or_else(|| parse_err("expected query<TAB>doc_id"))?;
        if doc.contains('\t') {
            return Err(parse_err("more than one TAB"));
        }
        let (query, doc) = (query.trim(), doc.trim());
        if query.is_empty() || doc.is_empty() {
            return Err(parse_err("empty query or doc_id"));
        }
        pairs.push(EvalPair {
            query: query.to_owned(),
            relevant_doc_id: doc.to_owned(),
        });
    }

    let known: HashSet<&str> = corpus.documents.iter().map(|d| d.doc_id.as_str()).collect();
    let mut missing: Vec<String> = pairs
        .iter()
        .filter(|p| !known.contains(p.relevant_doc_id.as_str()))
        .map(|p| p.relevant_doc_id.clone())
        .collect();
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(EvalError::UnknownDoc(missing));
    }
    Ok(pairs)
}

pub fn load_pairs(path: &Path, corpus: &CorpusStore) -> Result<Vec<EvalPair>, EvalError> {
    let source = fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_pairs(&source, corpus)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub mode: RankMode,
    pub accuracy_at_1: f64,
    pub accuracy_at_3: f64,
    pub mean_latency_s: f64,
    pub n_queries: usize,
    pub hits_at_1: usize,
    pub hits_at_3: usize,
    /// Queries with no keywords left; counted as misses.
    pub empty_queries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<ModeReport>,
}

impl EvalReport {
    pub fn row(&self, mode: RankMode) -> Option<&ModeReport> {
        self.rows.iter().find(|r| r.mode == mode)
    }

    /// Text table: one row per approach with accuracy and mean time.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<20} {:>10} {:>10} {:>12} {:>8} {:>6}",
            "Approach", "Acc@1 (%)", "Acc@3 (%)", "Time (s)", "Queries", "Empty"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<20} {:>10.4} {:>10.4} {:>12.6} {:>8} {:>6}",
                approach_name(r.mode),
                r.accuracy_at_1 * 100.0,
                r.accuracy_at_3 * 100.0,
                r.mean_latency_s,
                r.n_queries,
                r.empty_queries
            );
        }
        out
    }
}

pub fn approach_name(mode: RankMode) -> &'static str {
    match mode {
        RankMode::Bm25 => "BM25 (content)",
        RankMode::Embedding => "Embedding (heading)",
        RankMode::Hybrid => "Hybrid (Borda)",
    }
}

/// Runs every pair through `mode` sequentially. Latency covers the search
/// call only, after one untimed warm-up query.
pub fn evaluate(pairs: &[EvalPair], mode: RankMode, engine: &SearchEngine) -> Result<ModeReport, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::EmptyEval);
    }
    let _ = engine.search(&pairs[0].query, EVAL_DEPTH, mode);

    let (mut hits_at_1, mut hits_at_3, mut empty) = (0, 0, 0);
    let mut total_secs = 0.0;
    for pair in pairs {
        let start = Instant::now();
        let outcome = engine.search(&pair.query, EVAL_DEPTH, mode);
        total_secs += start.elapsed().as_secs_f64();
        let outcome = match outcome {
            Ok(o) => o,
            Err(RankError::EmptyQuery) => {
                empty += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        match outcome.hits.iter().position(|h| h.doc_id == pair.relevant_doc_id) {
            Some(0) => {
                hits_at_1 += 1;
                hits_at_3 += 1;
            }
            Some(_) => hits_at_3 += 1,
            None => {}
        }
    }
    let n = pairs.len();
    Ok(ModeReport {
        mode,
        accuracy_at_1: hits_at_1 as f64 / n as f64,
        accuracy_at_3: hits_at_3 as f64 / n as f64,
        mean_latency_s: total_secs / n as f64,
        n_queries: n,
        hits_at_1,
        hits_at_3,
        empty_queries: empty,
    })
}

/// `evaluate` for BM25, embedding and hybrid on the same pairs.
pub fn compare_modes(pairs: &[EvalPair], engine: &SearchEngine) -> Result<EvalReport, EvalError> {
    let rows = RankMode::ALL
        .into_iter()
        .map(|mode| evaluate(pairs, mode, engine))
        .collect::<Result<_, _>>()?;
    Ok(EvalReport { rows })
}
