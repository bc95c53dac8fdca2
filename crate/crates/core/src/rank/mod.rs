//! Heading ranking (embedding cosine), content ranking (BM25), Borda fusion
//! and country-based candidate filtering.

mod borda;
mod engine;
mod gazetteer;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bm25::{Bm25Error, Bm25Index};
use crate::corpus::ProcessedDocument;
use crate::embedding::{cosine, embed_keywords, EmbeddingError, EmbeddingTable, PooledVector};
use crate::ranked::{RankedEntry, RankedList};
use crate::text::TextPipeline;

pub use borda::{borda_aggregate, HybridResult};
pub use engine::{RankConfig, ResourceError, Resources, SearchEngine, SearchHit, SearchOutcome};
pub use gazetteer::{Gazetteer, GazetteerError};

#[derive(Debug, Error)]
pub enum RankError {
    #[error("query has no keywords left after processing; try rephrasing it")]
    EmptyQuery,
    #[error(transparent)]
    Dimension(#[from] EmbeddingError),
    #[error("rankings disagree: {0}")]
    RankMismatch(String),
    #[error(transparent)]
    Bm25(#[from] Bm25Error),
    #[error("corpus vectors have dimension {store} but the embedding table has {table}")]
    StoreDimension { store: usize, table: usize },
    #[error("top-k must be at least 1")]
    ZeroK,
}

/// Which ranking drives the result order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMode {
    #[default]
    Hybrid,
    Bm25,
    Embedding,
}

impl RankMode {
    pub const ALL: [RankMode; 3] = [RankMode::Bm25, RankMode::Embedding, RankMode::Hybrid];

    pub fn as_str(self) -> &'static str {
        match self {
            RankMode::Hybrid => "hybrid",
            RankMode::Bm25 => "bm25",
            RankMode::Embedding => "embedding",
        }
    }
}

impl fmt::Display for RankMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RankMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RankMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode {s:?} (expected hybrid, bm25 or embedding)"))
    }
}

/// A processed query: its keywords, their pooled vector and the countries
/// it mentions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryRepresentation {
    pub raw: String,
    pub keywords: Vec<String>,
    pub vector: PooledVector,
    pub detected_countries: BTreeSet<String>,
}

/// normalize → tokenize → drop stopwords and `?` → tag → keywords → embed.
/// Countries are detected on the tokens before stopword removal.
pub fn process_query(
    raw: &str,
    pipeline: &TextPipeline,
    embeddings: &EmbeddingTable,
    gazetteer: &Gazetteer,
) -> Result<QueryRepresentation, RankError> {
    let tokens = pipeline.query_tokens(raw);
    let keywords = pipeline.query_keywords(&tokens);
    if keywords.is_empty() {
        return Err(RankError::EmptyQuery);
    }
    Ok(QueryRepresentation {
        raw: raw.to_owned(),
        vector: embed_keywords(&keywords, embeddings),
        detected_countries: gazetteer.detect(&tokens),
        keywords,
    })
}

/// Documents by descending cosine between the query vector and their
/// heading vector.
pub fn heading_rank(query: &QueryRepresentation, docs: &[&ProcessedDocument]) -> Result<RankedList, RankError> {
    let entries = docs
        .iter()
        .map(|d| {
            Ok(RankedEntry {
                doc_id: d.doc_id.clone(),
                score: cosine(&query.vector.values, &d.heading_vector)?,
            })
        })
        .collect::<Result<Vec<_>, EmbeddingError>>()?;
    Ok(RankedList::from_scores(entries))
}

/// BM25 over the query keywords.
pub fn content_rank(query: &QueryRepresentation, index: &Bm25Index) -> RankedList {
    index.rank(&query.keywords)
}

/// Restricts `docs` to the countries the query mentions. Falls back to every
/// document when nothing is mentioned or nothing matches.
pub fn filter_candidates<'a>(query: &QueryRepresentation, docs: &'a [ProcessedDocument]) -> Vec<&'a ProcessedDocument> {
    if !query.detected_countries.is_empty() {
        let matching: Vec<&ProcessedDocument> = docs
            .iter()
            .filter(|d| query.detected_countries.contains(&d.country))
            .collect();
        if !matching.is_empty() {
            return matching;
        }
    }
    docs.iter().collect()
}
