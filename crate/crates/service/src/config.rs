use std::fs;
use std::path::{Path, PathBuf};

use retriever_core::{Bm25Params, RankConfig, ResourcePaths};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Names the config file when no path is given explicitly.
pub const CONFIG_ENV: &str = "RETRIEVER_CONFIG";
pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    Toml {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("invalid bm25 parameters: k1={k1} b={b}")]
    Bm25 { k1: f64, b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bm25Section {
    pub k1: f64,
    pub b: f64,
    pub global_stats: bool,
}

impl Default for Bm25Section {
    fn default() -> Self {
        let p = Bm25Params::default();
        Self {
            k1: p.k1,
            b: p.b,
            global_stats: false,
        }
    }
}

/// Service settings. Relative paths resolve against the config file's
/// directory.
///
/// ```toml
/// port = 8080
/// index = "index.json"
/// embeddings = "embeddings.txt"
/// lexicon = "lexicon.tsv"
/// stopwords = "stopwords.txt"
/// gazetteer = "gazetteer.json"
///
/// [bm25]
/// k1 = 1.5
/// b = 0.75
/// global_stats = false
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub port: u16,
    pub index: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub bm25: Bm25Section,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            port: DEFAULT_PORT,
            index: None,
            embeddings: None,
            lexicon: None,
            stopwords: None,
            gazetteer: None,
            bm25: Bm25Section::default(),
        }
    }
}

impl ServiceConfig {
    pub fn parse(source: &str, base_dir: &Path) -> Result<Self, toml::de::Error> {
        let mut config: ServiceConfig = toml::from_str(source)?;
        for p in [
            &mut config.index,
            &mut config.embeddings,
            &mut config.lexicon,
            &mut config.stopwords,
            &mut config.gazetteer,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base_dir.join(&*p);
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let source = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_owned(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&source, base).map_err(|source| ConfigError::Toml {
            path: path.to_owned(),
            source,
        })
    }

    /// Loads `explicit`, else the file named by `RETRIEVER_CONFIG`, else the
    /// defaults.
    pub fn discover(explicit: Option<&Path>) -> Result<Self, ConfigError> {
        match explicit {
            Some(path) => Self::load(path),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(path) if !path.is_empty() => Self::load(Path::new(&path)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn rank_config(&self) -> Result<RankConfig, ConfigError> {
        let bm25 = Bm25Params::new(self.bm25.k1, self.bm25.b).map_err(|_| ConfigError::Bm25 {
            k1: self.bm25.k1,
            b: self.bm25.b,
        })?;
        Ok(RankConfig {
            bm25,
            global_stats: self.bm25.global_stats,
        })
    }

    /// Resource paths, when all four are configured.
    pub fn resource_paths(&self) -> Option<ResourcePaths> {
        Some(ResourcePaths {
            embeddings: self.embeddings.clone()?,
            lexicon: self.lexicon.clone()?,
            stopwords: self.stopwords.clone()?,
            gazetteer: self.gazetteer.clone()?,
        })
    }
}
