use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::rank::Gazetteer;

/// Country value for documents that belong to no particular country.
pub const NO_COUNTRY: &str = "none";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceEntry {
    pub path: PathBuf,
    pub country: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uri: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusManifest {
    pub entries: Vec<SourceEntry>,
    /// Directory relative entry paths are resolved against.
    pub base_dir: PathBuf,
}

impl CorpusManifest {
    pub fn resolve(&self, entry: &SourceEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            self.base_dir.join(&entry.path)
        }
    }
}

/// Reads and validates a manifest file. Relative paths inside it are taken
/// relative to the manifest's own directory.
pub fn parse_manifest(manifest_file: &Path, gazetteer: &Gazetteer) -> Result<CorpusManifest, IngestError> {
    let source = fs::read_to_string(manifest_file).map_err(|source| IngestError::Unreadable {
        path: manifest_file.to_owned(),
        source,
    })?;
    let base_dir = manifest_file.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_manifest_str(&source, base_dir, gazetteer)
}

pub fn parse_manifest_str(
    source: &str,
    base_dir: PathBuf,
    gazetteer: &Gazetteer,
) -> Result<CorpusManifest, IngestError> {
    let entries: Vec<SourceEntry> = serde_json::from_str(source).map_err(|e| IngestError::ManifestSyntax {
        line: e.line(),
        message: e.to_string(),
    })?;
    if entries.is_empty() {
        return Err(IngestError::ManifestEmpty);
    }

    let mut paths = HashSet::new();
    let mut titles = HashSet::new();
    for entry in &entries {
        if !paths.insert(&entry.path) {
            return Err(IngestError::DuplicateEntry {
                field: "path",
                value: entry.path.display().to_string(),
            });
        }
        // titles seed doc ids, so they must be distinct too
        if !titles.insert(&entry.title) {
            return Err(IngestError::DuplicateEntry {
                field: "title",
                value: entry.title.clone(),
            });
        }
        if entry.title.trim().is_empty() {
            return Err(IngestError::ManifestSyntax {
                line: 0,
                message: format!("entry {} has an empty title", entry.path.display()),
            });
        }
        if entry.country != NO_COUNTRY && !gazetteer.has_country(&entry.country) {
            return Err(IngestError::UnknownCountry(entry.country.clone()));
        }
    }
    Ok(CorpusManifest { entries, base_dir })
}
