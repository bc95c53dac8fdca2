//! HTTP front end for the retriever: `POST /v1/query`, `GET /v1/health` and
//! `POST /v1/reindex`.
//!
//! The live engine sits behind a lock as an `Arc`. Queries clone the `Arc`
//! and release the lock before ranking, so a reindex swaps in the new engine
//! without waiting for in-flight queries and without any query seeing a mix
//! of two corpus versions.

mod api;
pub mod config;
pub mod error;

use std::net::SocketAddr;
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, RwLock};

use axum::routing::{get, post};
use axum::Router;
use retriever_core::{
    build_corpus, parse_manifest, CorpusStore, IngestError, RankConfig, RankError, ResourceError, ResourcePaths,
    Resources, SearchEngine,
};
use thiserror::Error;
use tokio::net::TcpListener;

pub use api::{
    build_response, HealthResponse, QueryRequest, QueryResponse, QueryResult, ReindexRequest, ReindexResponse,
    MAX_TOP_K,
};
pub use config::{Bm25Section, ConfigError, ServiceConfig, CONFIG_ENV};
pub use error::{ApiError, ErrorBody, ErrorCode};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Resources(#[from] ResourceError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error("no embeddings/lexicon/stopwords/gazetteer paths: configure them or rebuild the index")]
    MissingResources,
    #[error("cannot bind {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: std::io::Error,
    },
    #[error("server error: {0}")]
    Serve(#[source] std::io::Error),
}

/// Loads a persisted index and the resources it was built with. `paths`
/// overrides the resource paths recorded in the index.
pub fn open_index(index: &Path, paths: Option<ResourcePaths>, rank: RankConfig) -> Result<SearchEngine, ServiceError> {
    let store = CorpusStore::load(index)?;
    let paths = paths
        .or_else(|| store.resources.clone())
        .ok_or(ServiceError::MissingResources)?;
    let resources = Resources::load(&paths)?;
    Ok(SearchEngine::new(store, Arc::new(resources), rank)?)
}

struct Shared {
    engine: RwLock<Option<Arc<SearchEngine>>>,
    reindexing: AtomicBool,
    config: ServiceConfig,
    rank: RankConfig,
}

/// Handle shared by all request handlers.
#[derive(Clone)]
pub struct AppState {
    shared: Arc<Shared>,
}

/// Held for the duration of a reindex; clears the in-progress flag on drop.
struct ReindexGuard(AppState);

impl Drop for ReindexGuard {
    fn drop(&mut self) {
        self.0.shared.reindexing.store(false, Ordering::Release);
    }
}

impl AppState {
    /// A service with no index loaded.
    pub fn new(config: ServiceConfig) -> Result<Self, ServiceError> {
        let rank = config.rank_config()?;
        Ok(Self {
            shared: Arc::new(Shared {
                engine: RwLock::new(None),
                reindexing: AtomicBool::new(false),
                config,
                rank,
            }),
        })
    }

    pub fn with_engine(config: ServiceConfig, engine: SearchEngine) -> Result<Self, ServiceError> {
        let state = Self::new(config)?;
        state.install(engine);
        Ok(state)
    }

    /// Opens `config.index` when it names an existing file. A missing file
    /// leaves the service without an index until the first reindex.
    pub fn from_config(config: ServiceConfig) -> Result<Self, ServiceError> {
        let state = Self::new(config)?;
        if let Some(index) = state.shared.config.index.as_deref() {
            if index.exists() {
                let engine = open_index(index, state.shared.config.resource_paths(), state.shared.rank)?;
                state.install(engine);
            } else {
                tracing::warn!(index = %index.display(), "index file not found; serving without an index");
            }
        }
        Ok(state)
    }

    pub fn config(&self) -> &ServiceConfig {
        &self.shared.config
    }

    pub fn engine(&self) -> Option<Arc<SearchEngine>> {
        self.shared.engine.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn install(&self, engine: SearchEngine) {
        *self.shared.engine.write().unwrap_or_else(|e| e.into_inner()) = Some(Arc::new(engine));
    }

    fn begin_reindex(&self) -> Option<ReindexGuard> {
        self.shared
            .reindexing
            .compare_exchange(false, true, Ordering::AcqRel, Ordering::Acquire)
            .ok()
            .map(|_| ReindexGuard(self.clone()))
    }

    /// Builds a new engine from `manifest`, persists it when an index path is
    /// configured, then swaps it in. On error the live engine is untouched.
    fn rebuild(&self, manifest: &Path) -> Result<Arc<SearchEngine>, String> {
        let current = self.engine();
        let paths = self
            .shared
            .config
            .resource_paths()
            .or_else(|| current.as_ref().and_then(|e| e.store().resources.clone()))
            .ok_or_else(|| ServiceError::MissingResources.to_string())?;
        let resources = Resources::load(&paths).map_err(|e| e.to_string())?;
        let manifest = parse_manifest(manifest, &resources.gazetteer).map_err(|e| e.to_string())?;
        let version = current.as_ref().map_or(0, |e| e.store().version) + 1;
        let mut store =
            build_corpus(&manifest, &resources.pipeline, &resources.embeddings, version).map_err(|e| e.to_string())?;
        store.resources = Some(paths);
        if let Some(index) = self.shared.config.index.as_deref() {
            store.save(index).map_err(|e| e.to_string())?;
        }
        let engine =
            Arc::new(SearchEngine::new(store, Arc::new(resources), self.shared.rank).map_err(|e| e.to_string())?);
        *self.shared.engine.write().unwrap_or_else(|e| e.into_inner()) = Some(Arc::clone(&engine));
        Ok(engine)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/v1/query", post(api::query))
        .route("/v1/health", get(api::health))
        .route("/v1/reindex", post(api::reindex))
        .with_state(state)
}

/// Serves on an already bound listener until ctrl-c.
pub async fn serve_on(listener: TcpListener, state: AppState) -> Result<(), ServiceError> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(ServiceError::Serve)
}

/// Binds `0.0.0.0:<port>` and serves `config`.
pub async fn serve(config: ServiceConfig) -> Result<(), ServiceError> {
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let state = AppState::from_config(config)?;
    let listener = TcpListener::bind(addr)
        .await
        .map_err(|source| ServiceError::Bind { addr, source })?;
    let documents = state.engine().map_or(0, |e| e.documents().len());
    tracing::info!(%addr, documents, "listening");
    serve_on(listener, state).await
}
