//! Corpus ingest: manifest → heading sections → processed documents → store.

mod manifest;
mod segment;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{embed_keywords, EmbeddingTable};
use crate::text::{SpellCache, TextPipeline};

pub use manifest::{parse_manifest, parse_manifest_str, CorpusManifest, SourceEntry, NO_COUNTRY};
pub use segment::{doc_id, reassemble, segment_document, RawSection, HEADING_MARKER};

/// Snippet length, in characters.
pub const SNIPPET_CHARS: usize = 200;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("manifest line {line}: {message}")]
    ManifestSyntax { line: usize, message: String },
    #[error("manifest has no entries")]
    ManifestEmpty,
    #[error("manifest lists {field} {value:?} more than once")]
    DuplicateEntry { field: &'static str, value: String },
    #[error("unknown country code {0:?}")]
    UnknownCountry(String),
    #[error("{0}: no heading lines (a heading line starts with \"# \")")]
    NoHeadings(PathBuf),
    #[error("{path}:{line}: heading is empty")]
    EmptyHeading { path: PathBuf, line: usize },
    #[error("cannot read {path}: {source}")]
    Unreadable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("document id {0:?} produced twice")]
    DuplicateDocId(String),
    #[error("cannot write corpus store {path}: {source}")]
    StoreWrite {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus store {path} is malformed: {source}")]
    StoreFormat {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

/// A heading section after language processing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessedDocument {
    pub doc_id: String,
    pub country: String,
    pub heading: String,
    pub heading_keywords: Vec<String>,
    pub heading_vector: Vec<f64>,
    pub heading_vector_is_zero: bool,
    pub content_tokens: Vec<String>,
    pub snippet: String,
    pub uri: String,
}

/// Files the store was built from, so query-time tools can rebuild the same
/// pipeline without repeating every path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourcePaths {
    pub embeddings: PathBuf,
    pub lexicon: PathBuf,
    pub stopwords: PathBuf,
    pub gazetteer: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStore {
    pub version: u64,
    pub embedding_dim: usize,
    pub build_timestamp: String,
    pub documents: Vec<ProcessedDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resources: Option<ResourcePaths>,
}

impl CorpusStore {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus store always serializes")
    }

    /// Writes to a sibling temp file and renames it over `path`.
    pub fn save(&self, path: &Path) -> Result<(), IngestError> {
        let write_err = |source| IngestError::StoreWrite {
            path: path.to_owned(),
            source,
        };
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        let mut file = fs::File::create(&tmp).map_err(write_err)?;
        file.write_all(self.to_json().as_bytes()).map_err(write_err)?;
        file.sync_all().map_err(write_err)?;
        fs::rename(&tmp, path).map_err(write_err)
    }

    pub fn load(path: &Path) -> Result<Self, IngestError> {
        let text = fs::read_to_string(path).map_err(|source| IngestError::Unreadable {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| IngestError::StoreFormat {
            path: path.to_owned(),
            source,
        })
    }

    pub fn document(&self, doc_id: &str) -> Option<&ProcessedDocument> {
        self.documents.iter().find(|d| d.doc_id == doc_id)
    }
}

/// Runs the heading and content paths of the text pipeline over one section.
pub fn process_section(
    section: &RawSection,
    pipeline: &TextPipeline,
    embeddings: &EmbeddingTable,
    spell_cache: &mut SpellCache,
) -> ProcessedDocument {
    let heading_keywords = pipeline.heading_keywords(&section.heading_text);
    let pooled = embed_keywords(&heading_keywords, embeddings);
    ProcessedDocument {
        doc_id: section.doc_id.clone(),
        country: section.country.clone(),
        heading: section.heading_text.clone(),
        heading_keywords,
        heading_vector: pooled.values,
        heading_vector_is_zero: pooled.is_zero,
        content_tokens: pipeline.content_tokens(&section.body_text, spell_cache),
        snippet: section.body_text.chars().take(SNIPPET_CHARS).collect(),
        uri: section.uri.clone(),
    }
}

/// Reads every manifest file, then segments and processes them in manifest
/// order. Any failure aborts the whole build.
pub fn build_corpus(
    manifest: &CorpusManifest,
    pipeline: &TextPipeline,
    embeddings: &EmbeddingTable,
    version: u64,
) -> Result<CorpusStore, IngestError> {
    let sources = manifest
        .entries
        .iter()
        .map(|entry| {
            let path = manifest.resolve(entry);
            fs::read_to_string(&path)
                .map(|text| (entry, text))
                .map_err(|source| IngestError::Unreadable { path, source })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut sections = Vec::new();
    for (entry, text) in &sources {
        sections.extend(segment_document(text, entry)?);
    }
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = sections.iter().find(|s| !seen.insert(s.doc_id.as_str())) {
        return Err(IngestError::DuplicateDocId(dup.doc_id.clone()));
    }

    let mut cache = SpellCache::new();
    let documents = sections
        .iter()
        .map(|s| process_section(s, pipeline, embeddings, &mut cache))
        .collect();

    Ok(CorpusStore {
        version,
        embedding_dim: embeddings.dim(),
        build_timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
        documents,
        resources: None,
    })
}
