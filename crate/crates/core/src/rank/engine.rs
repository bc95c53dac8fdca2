use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    borda_aggregate, process_query, Gazetteer, GazetteerError, HybridResult, QueryRepresentation, RankError, RankMode,
};
use crate::bm25::{Bm25Index, Bm25Params};
use crate::corpus::{CorpusStore, ProcessedDocument, ResourcePaths};
use crate::embedding::{cosine_with_norms, norm, EmbeddingError, EmbeddingTable};
use crate::ranked::{RankedEntry, RankedList};
use crate::text::{TextError, TextPipeline};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RankConfig {
    pub bm25: Bm25Params,
    /// Score filtered candidates with whole-corpus BM25 statistics instead of
    /// statistics recomputed over the candidates.
    pub global_stats: bool,
}

#[derive(Debug, Error)]
pub enum ResourceError {
    #[error("lexicon or stopwords: {0}")]
    Text(#[from] TextError),
    #[error("embeddings: {0}")]
    Embedding(#[from] EmbeddingError),
    #[error("gazetteer: {0}")]
    Gazetteer(#[from] GazetteerError),
}

/// Everything query processing needs besides the corpus itself.
#[derive(Debug, Clone)]
pub struct Resources {
    pub pipeline: TextPipeline,
    pub embeddings: EmbeddingTable,
    pub gazetteer: Gazetteer,
}

impl Resources {
    pub fn load(paths: &ResourcePaths) -> Result<Self, ResourceError> {
        Ok(Self {
            pipeline: TextPipeline::load(&paths.lexicon, &paths.stopwords)?,
            embeddings: EmbeddingTable::load(&paths.embeddings)?,
            gazetteer: Gazetteer::load(&paths.gazetteer)?,
        })
    }
}

/// A ranked document. Ranks and scores from a ranking that the mode did not
/// run are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub doc_id: String,
    pub final_rank: usize,
    pub heading_rank: Option<usize>,
    pub content_rank: Option<usize>,
    pub borda_points: Option<u64>,
    pub heading_score: Option<f64>,
    pub content_score: Option<f64>,
}

impl From<HybridResult> for SearchHit {
    fn from(r: HybridResult) -> Self {
        Self {
            doc_id: r.doc_id,
            final_rank: r.final_rank,
            heading_rank: Some(r.heading_rank),
            content_rank: Some(r.content_rank),
            borda_points: Some(r.borda_points),
            heading_score: Some(r.heading_score),
            content_score: Some(r.content_score),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub query: QueryRepresentation,
    /// Documents left after country filtering.
    pub candidates: usize,
    pub hits: Vec<SearchHit>,
}

/// An immutable corpus plus the indexes and resources needed to rank it.
#[derive(Debug)]
pub struct SearchEngine {
    store: CorpusStore,
    resources: Arc<Resources>,
    config: RankConfig,
    index: Bm25Index,
    positions: HashMap<String, usize>,
    heading_norms: Vec<f64>,
    country_docs: BTreeMap<String, Vec<usize>>,
    /// Per-country indexes with statistics local to that country.
    country_index: HashMap<String, Bm25Index>,
}

impl SearchEngine {
    pub fn new(store: CorpusStore, resources: Arc<Resources>, config: RankConfig) -> Result<Self, RankError> {
        let dim = resources.embeddings.dim();
        if store.embedding_dim != dim {
            return Err(RankError::StoreDimension {
                store: store.embedding_dim,
                table: dim,
            });
        }
        if let Some(bad) = store.documents.iter().find(|d| d.heading_vector.len() != dim) {
            return Err(RankError::Dimension(EmbeddingError::Dimension {
                left: dim,
                right: bad.heading_vector.len(),
            }));
        }
        let index = Bm25Index::build(
            store.documents.iter().map(|d| (d.doc_id.clone(), &d.content_tokens)),
            config.bm25,
        )?;

        let positions = store
            .documents
            .iter()
            .enumerate()
            .map(|(i, d)| (d.doc_id.clone(), i))
            .collect();
        let heading_norms = store.documents.iter().map(|d| norm(&d.heading_vector)).collect();
        let mut country_docs: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, d) in store.documents.iter().enumerate() {
            country_docs.entry(d.country.clone()).or_default().push(i);
        }
        let country_index = country_docs
            .iter()
            .map(|(country, members)| {
                let docs = members.iter().map(|&i| {
                    let d = &store.documents[i];
                    (d.doc_id.clone(), &d.content_tokens)
                });
                Ok((country.clone(), Bm25Index::build(docs, config.bm25)?))
            })
            .collect::<Result<_, RankError>>()?;

        Ok(Self {
            store,
            resources,
            config,
            index,
            positions,
            heading_norms,
            country_docs,
            country_index,
        })
    }

    pub fn store(&self) -> &CorpusStore {
        &self.store
    }

    pub fn documents(&self) -> &[ProcessedDocument] {
        &self.store.documents
    }

    pub fn document(&self, doc_id: &str) -> Option<&ProcessedDocument> {
        self.positions.get(doc_id).map(|&i| &self.store.documents[i])
    }

    pub fn resources(&self) -> &Arc<Resources> {
        &self.resources
    }

    pub fn config(&self) -> RankConfig {
        self.config
    }

    pub fn index(&self) -> &Bm25Index {
        &self.index
    }

    pub fn process_query(&self, raw: &str) -> Result<QueryRepresentation, RankError> {
        let r = &self.resources;
        process_query(raw, &r.pipeline, &r.embeddings, &r.gazetteer)
    }

    /// Processes `raw` and returns the top `k` documents under `mode`.
    pub fn search(&self, raw: &str, k: usize, mode: RankMode) -> Result<SearchOutcome, RankError> {
        if k == 0 {
            return Err(RankError::ZeroK);
        }
        let query = self.process_query(raw)?;
        self.rank_query(query, k, mode)
    }

    /// Hybrid retrieval with full Borda provenance.
    pub fn retrieve(&self, raw: &str, k: usize) -> Result<Vec<HybridResult>, RankError> {
        if k == 0 {
            return Err(RankError::ZeroK);
        }
        let query = self.process_query(raw)?;
        let candidates = self.candidates(&query);
        let mut fused = self.fuse(&query, &candidates)?;
        fused.truncate(k);
        Ok(fused)
    }

    /// Ranks an already processed query.
    pub fn rank_query(&self, query: QueryRepresentation, k: usize, mode: RankMode) -> Result<SearchOutcome, RankError> {
        if k == 0 {
            return Err(RankError::ZeroK);
        }
        let candidates = self.candidates(&query);
        let hits: Vec<SearchHit> = match mode {
            RankMode::Hybrid => self
                .fuse(&query, &candidates)?
                .into_iter()
                .take(k)
                .map(SearchHit::from)
                .collect(),
            RankMode::Bm25 => self
                .content_ranking(&query, &candidates)?
                .entries()
                .iter()
                .take(k)
                .enumerate()
                .map(|(i, e)| SearchHit {
                    doc_id: e.doc_id.clone(),
                    final_rank: i + 1,
                    heading_rank: None,
                    content_rank: Some(i + 1),
                    borda_points: None,
                    heading_score: None,
                    content_score: Some(e.score),
                })
                .collect(),
            RankMode::Embedding => self
                .heading_ranking(&query, &candidates)?
                .entries()
                .iter()
                .take(k)
                .enumerate()
                .map(|(i, e)| SearchHit {
                    doc_id: e.doc_id.clone(),
                    final_rank: i + 1,
                    heading_rank: Some(i + 1),
                    content_rank: None,
                    borda_points: None,
                    heading_score: Some(e.score),
                    content_score: None,
                })
                .collect(),
        };
        Ok(SearchOutcome {
            candidates: candidates.len(),
            query,
            hits,
        })
    }

    fn fuse(&self, query: &QueryRepresentation, candidates: &Candidates) -> Result<Vec<HybridResult>, RankError> {
        let heading = self.heading_ranking(query, candidates)?;
        let content = self.content_ranking(query, candidates)?;
        borda_aggregate(&heading, &content)
    }

    /// Positions of the documents in the detected countries, or every
    /// document when none are detected or none match.
    fn candidates(&self, query: &QueryRepresentation) -> Candidates {
        let mut countries: Vec<&str> = Vec::new();
        let mut members: Vec<usize> = Vec::new();
        for c in &query.detected_countries {
            if let Some(docs) = self.country_docs.get(c) {
                countries.push(c);
                members.extend_from_slice(docs);
            }
        }
        if members.is_empty() {
            return Candidates::All(self.store.documents.len());
        }
        members.sort_unstable();
        Candidates::Countries {
            countries: countries.into_iter().map(str::to_owned).collect(),
            members,
        }
    }

    fn heading_ranking(&self, query: &QueryRepresentation, candidates: &Candidates) -> Result<RankedList, RankError> {
        let q = &query.vector.values;
        if q.len() != self.resources.embeddings.dim() {
            return Err(RankError::Dimension(EmbeddingError::Dimension {
                left: q.len(),
                right: self.resources.embeddings.dim(),
            }));
        }
        let q_norm = norm(q);
        let entries = candidates
            .positions()
            .map(|i| {
                let d = &self.store.documents[i];
                RankedEntry {
                    doc_id: d.doc_id.clone(),
                    score: cosine_with_norms(q, q_norm, &d.heading_vector, self.heading_norms[i]),
                }
            })
            .collect();
        Ok(RankedList::from_scores(entries))
    }

    fn content_ranking(&self, query: &QueryRepresentation, candidates: &Candidates) -> Result<RankedList, RankError> {
        let terms = &query.keywords;
        match candidates {
            Candidates::All(_) => Ok(self.index.rank(terms)),
            Candidates::Countries { members, .. } if self.config.global_stats => {
                let ids: Vec<&str> = members
                    .iter()
                    .map(|&i| self.store.documents[i].doc_id.as_str())
                    .collect();
                Ok(self.index.rank_subset(terms, &ids)?)
            }
            Candidates::Countries { countries, members } => {
                if let [single] = countries.as_slice() {
                    return Ok(self.country_index[single].rank(terms));
                }
                let docs = members.iter().map(|&i| {
                    let d = &self.store.documents[i];
                    (d.doc_id.clone(), &d.content_tokens)
                });
                Ok(Bm25Index::build(docs, self.config.bm25)?.rank(terms))
            }
        }
    }
}

enum Candidates {
    All(usize),
    Countries {
        countries: Vec<String>,
        members: Vec<usize>,
    },
}

impl Candidates {
    fn len(&self) -> usize {
        match self {
            Candidates::All(n) => *n,
            Candidates::Countries { members, .. } => members.len(),
        }
    }

    fn positions(&self) -> Box<dyn Iterator<Item = usize> + '_> {
        match self {
            Candidates::All(n) => Box::new(0..*n),
            Candidates::Countries { members, .. } => Box::new(members.iter().copied()),
        }
    }
}
