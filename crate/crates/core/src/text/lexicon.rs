use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::{PosTag, TextError};

const ALPHABET_HEADER: &str = "#alphabet:";

/// A lexicon entry: corpus frequency and part-of-speech tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexEntry {
    pub frequency: u64,
    pub tag: PosTag,
}

/// Word list driving tokenization, tagging and spelling correction.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: HashMap<String, LexEntry>,
    alphabet: Vec<char>,
    /// Longest entry, in chars. Bounds the longest-match search.
    max_word_chars: usize,
    /// Which word lengths (in chars) occur at all.
    lengths: Vec<bool>,
}

impl Lexicon {
    pub fn new<I, S>(entries: I, alphabet: Vec<char>) -> Result<Self, TextError>
    where
        I: IntoIterator<Item = (S, LexEntry)>,
        S: Into<String>,
    {
        if alphabet.is_empty() {
            return Err(TextError::EmptyAlphabet);
        }
        let mut map = HashMap::new();
        for (word, entry) in entries {
            let word = word.into();
            if word.is_empty() {
                return Err(TextError::EmptyWord);
            }
            map.insert(word, entry);
        }
        let max_word_chars = map.keys().map(|w| w.chars().count()).max().unwrap_or(0);
        let mut lengths = vec![false; max_word_chars + 1];
        for w in map.keys() {
            lengths[w.chars().count()] = true;
        }
        let mut alphabet = alphabet;
        alphabet.sort_unstable();
        alphabet.dedup();
        Ok(Self {
            entries: map,
            alphabet,
            max_word_chars,
            lengths,
        })
    }

    /// Parses the TSV lexicon format.
    ///
    /// The first non-blank line must be `#alphabet:` followed by the alphabet
    /// characters (whitespace between them is ignored). Every other line is
    /// `word<TAB>frequency<TAB>tag`; blank lines and other `#` lines are skipped.
    pub fn parse(source: &str) -> Result<Self, TextError> {
        let mut alphabet: Option<Vec<char>> = None;
        let mut entries = Vec::new();
        for (idx, raw) in source.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix(ALPHABET_HEADER) {
                if alphabet.is_some() {
                    return Err(TextError::parse(line_no, "duplicate #alphabet header"));
                }
                alphabet = Some(rest.chars().filter(|c| !c.is_whitespace()).collect());
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            if alphabet.is_none() {
                return Err(TextError::parse(line_no, "entry before #alphabet header"));
            }
            let mut fields = line.split('\t');
            let (Some(word), Some(freq), Some(tag), None) =
                (fields.next(), fields.next(), fields.next(), fields.next())
            else {
                return Err(TextError::parse(line_no, "expected word<TAB>frequency<TAB>tag"));
            };
            if word.is_empty() {
                return Err(TextError::parse(line_no, "empty word"));
            }
            let frequency = freq
                .trim()
                .parse::<u64>()
                .map_err(|e| TextError::parse(line_no, format!("bad frequency {freq:?}: {e}")))?;
            let tag = tag.trim().parse::<PosTag>().map_err(|e| TextError::parse(line_no, e))?;
            entries.push((word.to_owned(), LexEntry { frequency, tag }));
        }
        let alphabet = alphabet.ok_or_else(|| TextError::parse(1, "missing #alphabet header"))?;
        Self::new(entries, alphabet)
    }

    pub fn load(path: &Path) -> Result<Self, TextError> {
        let source = fs::read_to_string(path).map_err(|e| TextError::io(path, e))?;
        Self::parse(&source)
    }

    pub fn get(&self, word: &str) -> Option<&LexEntry> {
        self.entries.get(word)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn frequency(&self, word: &str) -> Option<u64> {
        self.entries.get(word).map(|e| e.frequency)
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn max_word_chars(&self) -> usize {
        self.max_word_chars
    }

    /// True if some entry is exactly `chars` characters long.
    pub fn has_length(&self, chars: usize) -> bool {
        self.lengths.get(chars).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}
