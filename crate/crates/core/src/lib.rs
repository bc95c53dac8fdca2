//! Hybrid document retrieval for short Thai queries.
//!
//! Documents are heading-delimited sections. Each query is ranked two ways:
//! by cosine similarity between its mean keyword embedding and each
//! section's mean heading-keyword embedding, and by BM25 over section
//! content. The two rankings are fused with a Borda count, optionally after
//! restricting candidates to the countries the query mentions.
//!
//! ```no_run
//! use std::sync::Arc;
//! use retriever_core::{CorpusStore, RankConfig, RankMode, Resources, SearchEngine};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let store = CorpusStore::load("index.json".as_ref())?;
//! let resources = Resources::load(store.resources.as_ref().unwrap())?;
//! let engine = SearchEngine::new(store, Arc::new(resources), RankConfig::default())?;
//! let outcome = engine.search("ขอข้อมูลการนำเข้าสินค้าในเมียนมาร์", 3, RankMode::Hybrid)?;
//! for hit in outcome.hits {
//!     println!("{} {}", hit.final_rank, hit.doc_id);
//! }
//! # Ok(())
//! # }
//! ```

pub mod bm25;
pub mod corpus;
pub mod embedding;
pub mod eval;
pub mod rank;
pub mod ranked;
pub mod synthetic;
pub mod text;

pub use bm25::{Bm25Error, Bm25Index, Bm25Params};
pub use corpus::{
    build_corpus, parse_manifest, process_section, segment_document, CorpusManifest, CorpusStore, IngestError,
    ProcessedDocument, RawSection, ResourcePaths, SourceEntry,
};
pub use embedding::{cosine, embed_keywords, EmbeddingError, EmbeddingTable, PooledVector};
pub use eval::{compare_modes, evaluate, load_pairs, EvalError, EvalPair, EvalReport, ModeReport};
pub use rank::{
    borda_aggregate, content_rank, filter_candidates, heading_rank, process_query, Gazetteer, GazetteerError,
    HybridResult, QueryRepresentation, RankConfig, RankError, RankMode, ResourceError, Resources, SearchEngine,
    SearchHit, SearchOutcome,
};
pub use ranked::{RankedEntry, RankedList};
pub use text::{StopwordSet, TextError, TextPipeline};
