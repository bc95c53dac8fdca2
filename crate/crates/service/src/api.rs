use std::path::PathBuf;
use std::time::Instant;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::Json;
use retriever_core::{RankError, RankMode, SearchEngine, SearchOutcome};
use serde::{Deserialize, Serialize};

use crate::error::{ApiError, ErrorCode};
use crate::AppState;

pub const DEFAULT_TOP_K: i64 = 3;
pub const MAX_TOP_K: i64 = 50;

fn default_top_k() -> i64 {
    DEFAULT_TOP_K
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryRequest {
    pub text: String,
    #[serde(default = "default_top_k")]
    pub top_k: i64,
    #[serde(default)]
    pub mode: RankMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResult {
    pub doc_id: String,
    pub heading: String,
    pub country: String,
    pub snippet: String,
    pub uri: String,
    pub heading_rank: Option<usize>,
    pub content_rank: Option<usize>,
    pub borda_points: Option<u64>,
    pub final_rank: usize,
}

/// `latency_ms` is serialized last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResponse {
    pub index_version: u64,
    pub mode: RankMode,
    pub detected_countries: Vec<String>,
    pub results: Vec<QueryResult>,
    pub latency_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
    pub documents: usize,
    pub version: u64,
    pub embedding_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReindexRequest {
    pub manifest: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReindexResponse {
    pub documents: usize,
    pub version: u64,
}

fn bad_request(rejection: JsonRejection) -> ApiError {
    ApiError::new(ErrorCode::BadRequest, rejection.body_text())
}

pub(crate) async fn query(
    State(state): State<AppState>,
    payload: Result<Json<QueryRequest>, JsonRejection>,
) -> Result<Json<QueryResponse>, ApiError> {
    let started = Instant::now();
    let Json(req) = payload.map_err(bad_request)?;
    if req.text.trim().is_empty() {
        return Err(ApiError::new(ErrorCode::EmptyQuery, "query text is blank"));
    }
    if !(1..=MAX_TOP_K).contains(&req.top_k) {
        return Err(ApiError::new(
            ErrorCode::BadTopK,
            format!("top_k must be between 1 and {MAX_TOP_K}, got {}", req.top_k),
        ));
    }
    let engine = state
        .engine()
        .ok_or_else(|| ApiError::new(ErrorCode::NoIndex, "no index is loaded; POST /v1/reindex first"))?;

    let outcome = engine
        .search(&req.text, req.top_k as usize, req.mode)
        .map_err(|e| match e {
            RankError::EmptyQuery => ApiError::new(ErrorCode::EmptyQuery, e.to_string()),
            other => ApiError::new(ErrorCode::Internal, other.to_string()),
        })?;

    Ok(Json(build_response(
        &engine,
        outcome,
        req.mode,
        started.elapsed().as_secs_f64() * 1e3,
    )))
}

/// Wire form of a search outcome, as returned by `POST /v1/query`.
pub fn build_response(engine: &SearchEngine, outcome: SearchOutcome, mode: RankMode, latency_ms: f64) -> QueryResponse {
    let results = outcome
        .hits
        .into_iter()
        .map(|hit| {
            let doc = engine.document(&hit.doc_id).expect("hits come from the loaded corpus");
            QueryResult {
                heading: doc.heading.clone(),
                country: doc.country.clone(),
                snippet: doc.snippet.clone(),
                uri: doc.uri.clone(),
                heading_rank: hit.heading_rank,
                content_rank: hit.content_rank,
                borda_points: hit.borda_points,
                final_rank: hit.final_rank,
                doc_id: hit.doc_id,
            }
        })
        .collect();
    QueryResponse {
        index_version: engine.store().version,
        mode,
        detected_countries: outcome.query.detected_countries.into_iter().collect(),
        results,
        latency_ms,
    }
}

pub(crate) async fn health(State(state): State<AppState>) -> Json<HealthResponse> {
    let (documents, version, embedding_dim) = match state.engine() {
        Some(e) => (e.documents().len(), e.store().version, e.store().embedding_dim),
        None => (0, 0, 0),
    };
    Json(HealthResponse {
        status: "ok".to_owned(),
        documents,
        version,
        embedding_dim,
    })
}

pub(crate) async fn reindex(
    State(state): State<AppState>,
    payload: Result<Json<ReindexRequest>, JsonRejection>,
) -> Result<Json<ReindexResponse>, ApiError> {
    let Json(req) = payload.map_err(bad_request)?;
    let guard = state
        .begin_reindex()
        .ok_or_else(|| ApiError::new(ErrorCode::ReindexInProgress, "a reindex is already running"))?;

    // The guard moves into the blocking task so the flag stays set until the
    // build finishes even if this request is dropped.
    let built = tokio::task::spawn_blocking(move || {
        let _guard = guard;
        state.rebuild(&req.manifest)
    })
    .await
    .map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))?;

    let engine = built.map_err(|message| {
        tracing::warn!(%message, "reindex failed; keeping the current index");
        ApiError::new(ErrorCode::IngestFailed, message)
    })?;
    tracing::info!(
        documents = engine.documents().len(),
        version = engine.store().version,
        "reindexed"
    );
    Ok(Json(ReindexResponse {
        documents: engine.documents().len(),
        version: engine.store().version,
    }))
}
