use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GazetteerError {
    #[error("gazetteer is not a JSON object of string lists: {0}")]
    Json(#[from] serde_json::Error),
    #[error("surface form {surface:?} maps to both {first} and {second}")]
    DuplicateSurface {
        surface: String,
        first: String,
        second: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Country codes and the words queries use to mention them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gazetteer {
    countries: BTreeMap<String, Vec<String>>,
    by_surface: HashMap<String, String>,
}

impl Gazetteer {
    pub fn new(countries: BTreeMap<String, Vec<String>>) -> Result<Self, GazetteerError> {
        let mut by_surface = HashMap::new();
        for (code, forms) in &countries {
            for form in forms {
                if let Some(first) = by_surface.insert(form.clone(), code.clone()) {
                    if &first != code {
                        return Err(GazetteerError::DuplicateSurface {
                            surface: form.clone(),
                            first,
                            second: code.clone(),
                        });
                    }
                }
            }
        }
        Ok(Self { countries, by_surface })
    }

    /// `{ "MM": ["เมียนมาร์", "พม่า"], ... }`
    pub fn parse(source: &str) -> Result<Self, GazetteerError> {
        Self::new(serde_json::from_str(source)?)
    }

    pub fn load(path: &Path) -> Result<Self, GazetteerError> {
        let source = fs::read_to_string(path).map_err(|source| GazetteerError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&source)
    }

    pub fn has_country(&self, code: &str) -> bool {
        self.countries.contains_key(code)
    }

    pub fn country_of(&self, surface: &str) -> Option<&str> {
        self.by_surface.get(surface).map(String::as_str)
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.countries.keys().map(String::as_str)
    }

    /// Countries mentioned by any of `tokens`.
    pub fn detect<S: AsRef<str>>(&self, tokens: &[S]) -> BTreeSet<String> {
        tokens
            .iter()
            .filter_map(|t| self.country_of(t.as_ref()))
            .map(str::to_owned)
            .collect()
    }
}
