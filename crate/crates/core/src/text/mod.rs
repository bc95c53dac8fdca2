//! Thai text pipeline: normalization, dictionary tokenization, spelling
//! correction, stopword removal, lexicon POS tagging and keyword extraction.
//!
//! Everything here is driven by data files (lexicon and stopword list), so a
//! tiny fixture lexicon exercises the exact same code path as a full one.

mod lexicon;
mod normalize;
mod spell;
mod tokenize;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lexicon::{LexEntry, Lexicon};
pub use normalize::{is_combining_mark, normalize};
pub use spell::correct_spelling;
pub use tokenize::tokenize;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("lexicon alphabet is empty")]
    EmptyAlphabet,
    #[error("lexicon contains an empty word")]
    EmptyWord,
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl TextError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_owned(),
            source,
        }
    }
}

/// The ORCHID tags the pipeline distinguishes. Everything else is `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PosTag {
    /// Measurement classifier.
    Cmtr,
    /// Proper noun.
    Nprp,
    /// Common noun.
    Ncmn,
    /// Title noun.
    Nttl,
    /// Active verb.
    Vact,
    /// Stative verb.
    Vsta,
    Pron,
    Prep,
    Part,
    Punc,
    Other,
}

impl PosTag {
    pub const ALL: [PosTag; 11] = [
        PosTag::Cmtr,
        PosTag::Nprp,
        PosTag::Ncmn,
        PosTag::Nttl,
        PosTag::Vact,
        PosTag::Vsta,
        PosTag::Pron,
        PosTag::Prep,
        PosTag::Part,
        PosTag::Punc,
        PosTag::Other,
    ];

    /// Tags whose words are kept as keywords.
    pub fn is_keyword_tag(self) -> bool {
        matches!(
            self,
            PosTag::Cmtr | PosTag::Nprp | PosTag::Ncmn | PosTag::Nttl | PosTag::Vact | PosTag::Vsta
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Cmtr => "CMTR",
            PosTag::Nprp => "NPRP",
            PosTag::Ncmn => "NCMN",
            PosTag::Nttl => "NTTL",
            PosTag::Vact => "VACT",
            PosTag::Vsta => "VSTA",
            PosTag::Pron => "PRON",
            PosTag::Prep => "PREP",
            PosTag::Part => "PART",
            PosTag::Punc => "PUNC",
            PosTag::Other => "OTHER",
        }
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PosTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PosTag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown POS tag {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub surface: String,
    pub tag: PosTag,
}

/// Words dropped from content and queries.
#[derive(Debug, Clone, Default)]
pub struct StopwordSet {
    words: HashSet<String>,
}

impl StopwordSet {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            words: words.into_iter().map(Into::into).collect(),
        }
    }

    /// One word per line; `#` lines and blank lines are ignored.
    pub fn parse(source: &str) -> Self {
        Self::new(
            source
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn load(path: &Path) -> Result<Self, TextError> {
        let source = fs::read_to_string(path).map_err(|e| TextError::io(path, e))?;
        Ok(Self::parse(&source))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Order-preserving filter. `?` is always removed.
pub fn remove_stopwords(tokens: &[String], stops: &StopwordSet) -> Vec<String> {
    tokens
        .iter()
        .filter(|t| t.as_str() != "?" && !stops.contains(t))
        .cloned()
        .collect()
}

/// Tags each token from the lexicon; unknown tokens become common nouns.
pub fn pos_tag(tokens: &[String], lexicon: &Lexicon) -> Vec<TaggedToken> {
    tokens
        .iter()
        .map(|t| TaggedToken {
            surface: t.clone(),
            tag: lexicon.get(t).map_or(PosTag::Ncmn, |e| e.tag),
        })
        .collect()
}

/// Keeps keyword-tagged surfaces in order, duplicates included.
pub fn extract_keywords(tagged: &[TaggedToken]) -> Vec<String> {
    tagged
        .iter()
        .filter(|t| t.tag.is_keyword_tag())
        .map(|t| t.surface.clone())
        .collect()
}

/// Lexicon and stopwords bundled with the three pipeline paths
/// (heading, content, query).
#[derive(Debug, Clone)]
pub struct TextPipeline {
    pub lexicon: Lexicon,
    pub stopwords: StopwordSet,
}

/// Memo of spelling corrections, shared across the sections of one build.
pub type SpellCache = HashMap<String, String>;

impl TextPipeline {
    pub fn new(lexicon: Lexicon, stopwords: StopwordSet) -> Self {
        Self { lexicon, stopwords }
    }

    pub fn load(lexicon: &Path, stopwords: &Path) -> Result<Self, TextError> {
        Ok(Self::new(Lexicon::load(lexicon)?, StopwordSet::load(stopwords)?))
    }

    /// normalize → tokenize → tag → keywords. No stopword removal: headings
    /// are short and the tag filter already drops function words.
    pub fn heading_keywords(&self, heading: &str) -> Vec<String> {
        let tokens = tokenize(&normalize(heading), &self.lexicon);
        extract_keywords(&pos_tag(&tokens, &self.lexicon))
    }

    /// normalize → tokenize → spell-correct → drop stopwords.
    pub fn content_tokens(&self, body: &str, cache: &mut SpellCache) -> Vec<String> {
        let tokens: Vec<String> = tokenize(&normalize(body), &self.lexicon)
            .into_iter()
            .map(|t| self.correct_cached(t, cache))
            .collect();
        remove_stopwords(&tokens, &self.stopwords)
    }

    /// Tokens of a query after normalization, before any filtering.
    pub fn query_tokens(&self, query: &str) -> Vec<String> {
        tokenize(&normalize(query), &self.lexicon)
    }

    /// Query keywords: drop stopwords and `?`, then tag and filter.
    pub fn query_keywords(&self, tokens: &[String]) -> Vec<String> {
        let kept = remove_stopwords(tokens, &self.stopwords);
        extract_keywords(&pos_tag(&kept, &self.lexicon))
    }

    fn correct_cached(&self, token: String, cache: &mut SpellCache) -> String {
        // digits and punctuation are left alone; only words get corrected
        if self.lexicon.contains(&token) || !token.chars().any(char::is_alphabetic) {
            return token;
        }
        if let Some(hit) = cache.get(&token) {
            return hit.clone();
        }
        let corrected = correct_spelling(&token, &self.lexicon);
        cache.insert(token, corrected.clone());
        corrected
    }
}
