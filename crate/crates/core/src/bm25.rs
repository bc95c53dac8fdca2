//! Inverted index over content tokens with Okapi BM25 scoring.
//!
//! ```text
//! score(q, d) = Σ_{t ∈ set(q), tf(t,d) > 0} idf(t) · tf·(k1 + 1) / (tf + k1·(1 − b + b·dl/avgdl))
//! idf(t)      = ln((N − df + 0.5) / (df + 0.5) + 1)
//! ```
//!
//! The `+1` inside the logarithm keeps idf positive even for terms that occur
//! in every document.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ranked::{RankedEntry, RankedList};

#[derive(Debug, Error, PartialEq)]
pub enum Bm25Error {
    #[error("duplicate document id {0:?}")]
    DuplicateDoc(String),
    #[error("cannot index an empty corpus")]
    EmptyCorpus,
    #[error("unknown document id {0:?}")]
    UnknownDoc(String),
    #[error("invalid BM25 parameters: k1={k1}, b={b} (need k1 >= 0 and 0 <= b <= 1)")]
    InvalidParams { k1: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Self { k1: 1.5, b: 0.75 }
    }
}

impl Bm25Params {
    pub fn new(k1: f64, b: f64) -> Result<Self, Bm25Error> {
        let params = Self { k1, b };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), Bm25Error> {
        if self.k1 >= 0.0 && (0.0..=1.0).contains(&self.b) {
            Ok(())
        } else {
            Err(Bm25Error::InvalidParams { k1: self.k1, b: self.b })
        }
    }
}

#[derive(Debug, Clone)]
pub struct Bm25Index {
    params: Bm25Params,
    doc_ids: Vec<String>,
    doc_pos: HashMap<String, u32>,
    doc_len: Vec<u32>,
    avg_doc_len: f64,
    /// term → (doc position, term frequency), ascending by position.
    postings: HashMap<String, Vec<(u32, u32)>>,
}

impl Bm25Index {
    /// Builds the index. Documents keep their input order internally; ranking
    /// never depends on it.
    pub fn build<I, D, T>(docs: I, params: Bm25Params) -> Result<Self, Bm25Error>
    where
        I: IntoIterator<Item = (D, T)>,
        D: Into<String>,
        T: IntoIterator,
        T::Item: AsRef<str>,
    {
        params.validate()?;
        let mut doc_ids = Vec::new();
        let mut doc_pos = HashMap::new();
        let mut doc_len = Vec::new();
        let mut postings: HashMap<String, Vec<(u32, u32)>> = HashMap::new();

        for (id, tokens) in docs {
            let id = id.into();
            let pos = doc_ids.len() as u32;
            if doc_pos.insert(id.clone(), pos).is_some() {
                return Err(Bm25Error::DuplicateDoc(id));
            }
            doc_ids.push(id);

            let mut counts: HashMap<&str, u32> = HashMap::new();
            let tokens: Vec<T::Item> = tokens.into_iter().collect();
            for t in &tokens {
                *counts.entry(t.as_ref()).or_default() += 1;
            }
            doc_len.push(tokens.len() as u32);
            for (term, tf) in counts {
                postings.entry(term.to_owned()).or_default().push((pos, tf));
            }
        }
        if doc_ids.is_empty() {
            return Err(Bm25Error::EmptyCorpus);
        }
        let total: u64 = doc_len.iter().map(|&l| u64::from(l)).sum();
        let avg_doc_len = total as f64 / doc_ids.len() as f64;

        Ok(Self {
            params,
            doc_ids,
            doc_pos,
            doc_len,
            avg_doc_len,
            postings,
        })
    }

    pub fn params(&self) -> Bm25Params {
        self.params
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn avg_doc_len(&self) -> f64 {
        self.avg_doc_len
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_len(&self, doc_id: &str) -> Option<u32> {
        self.doc_pos.get(doc_id).map(|&p| self.doc_len[p as usize])
    }

    pub fn contains_doc(&self, doc_id: &str) -> bool {
        self.doc_pos.contains_key(doc_id)
    }

    /// Number of documents containing `term`.
    pub fn df(&self, term: &str) -> usize {
        self.postings.get(term).map_or(0, Vec::len)
    }

    pub fn tf(&self, term: &str, doc_id: &str) -> u32 {
        match self.doc_pos.get(doc_id) {
            Some(&pos) => self.tf_at(term, pos),
            None => 0,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.postings.keys().map(String::as_str)
    }

    pub fn idf(&self, term: &str) -> f64 {
        let n = self.n_docs() as f64;
        let df = self.df(term) as f64;
        ((n - df + 0.5) / (df + 0.5) + 1.0).ln()
    }

    fn tf_at(&self, term: &str, pos: u32) -> u32 {
        self.postings
            .get(term)
            .and_then(|list| list.binary_search_by_key(&pos, |&(p, _)| p).ok().map(|i| list[i].1))
            .unwrap_or(0)
    }

    fn term_weight(&self, idf: f64, tf: u32, doc_len: u32) -> f64 {
        let Bm25Params { k1, b } = self.params;
        let tf = f64::from(tf);
        let norm = 1.0 - b + b * f64::from(doc_len) / self.avg_doc_len;
        idf * tf * (k1 + 1.0) / (tf + k1 * norm)
    }

    /// BM25 score of one document. Repeated query terms count once.
    pub fn score<S: AsRef<str>>(&self, query_terms: &[S], doc_id: &str) -> Result<f64, Bm25Error> {
        let pos = *self
            .doc_pos
            .get(doc_id)
            .ok_or_else(|| Bm25Error::UnknownDoc(doc_id.to_owned()))?;
        let len = self.doc_len[pos as usize];
        let mut score = 0.0;
        for term in distinct(query_terms) {
            let tf = self.tf_at(term, pos);
            if tf > 0 {
                score += self.term_weight(self.idf(term), tf, len);
            }
        }
        Ok(score)
    }

    /// Every document, best first; ties by ascending doc id.
    pub fn rank<S: AsRef<str>>(&self, query_terms: &[S]) -> RankedList {
        let scores = self.accumulate(query_terms);
        RankedList::from_scores(
            self.doc_ids
                .iter()
                .zip(scores)
                .map(|(id, score)| RankedEntry {
                    doc_id: id.clone(),
                    score,
                })
                .collect(),
        )
    }

    /// Ranks only `doc_ids` (which must all be indexed), keeping the
    /// collection statistics of the whole index.
    pub fn rank_subset<S: AsRef<str>>(&self, query_terms: &[S], doc_ids: &[&str]) -> Result<RankedList, Bm25Error> {
        let scores = self.accumulate(query_terms);
        let entries = doc_ids
            .iter()
            .map(|&id| {
                let pos = *self
                    .doc_pos
                    .get(id)
                    .ok_or_else(|| Bm25Error::UnknownDoc(id.to_owned()))?;
                Ok(RankedEntry {
                    doc_id: id.to_owned(),
                    score: scores[pos as usize],
                })
            })
            .collect::<Result<Vec<_>, Bm25Error>>()?;
        Ok(RankedList::from_scores(entries))
    }

    /// Per-document scores in index order, accumulated term by term in the
    /// same order `score` uses so both paths give identical floats.
    fn accumulate<S: AsRef<str>>(&self, query_terms: &[S]) -> Vec<f64> {
        let mut scores = vec![0.0; self.n_docs()];
        for term in distinct(query_terms) {
            let Some(list) = self.postings.get(term) else {
                continue;
            };
            let idf = self.idf(term);
            for &(pos, tf) in list {
                scores[pos as usize] += self.term_weight(idf, tf, self.doc_len[pos as usize]);
            }
        }
        scores
    }
}

/// Query terms in first-occurrence order without repeats.
fn distinct<S: AsRef<str>>(terms: &[S]) -> Vec<&str> {
    let mut seen = HashSet::new();
    terms.iter().map(AsRef::as_ref).filter(|t| seen.insert(*t)).collect()
}
