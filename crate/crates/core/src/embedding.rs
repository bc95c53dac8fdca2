//! Word-vector table in the plain-text word2vec format, mean pooling and
//! cosine similarity.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: word {word:?} listed twice")]
    DuplicateWord { line: usize, word: String },
    #[error("vector dimensions differ: {left} vs {right}")]
    Dimension { left: usize, right: usize },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn format_err(line: usize, message: impl Into<String>) -> EmbeddingError {
    EmbeddingError::Format {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            vectors: HashMap::new(),
        }
    }

    pub fn insert(&mut self, word: impl Into<String>, vector: Vec<f64>) -> Result<(), EmbeddingError> {
        if vector.len() != self.dim {
            return Err(EmbeddingError::Dimension {
                left: self.dim,
                right: vector.len(),
            });
        }
        let word = word.into();
        if self.vectors.contains_key(&word) {
            return Err(EmbeddingError::DuplicateWord { line: 0, word });
        }
        self.vectors.insert(word, vector);
        Ok(())
    }

    /// Parses `V D` followed by exactly `V` rows of `word v1 .. vD`.
    pub fn parse(source: &str) -> Result<Self, EmbeddingError> {
        let mut lines = source
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.trim().is_empty());

        let (_, header) = lines.next().ok_or_else(|| format_err(1, "missing `V D` header"))?;
        let mut fields = header.split_whitespace();
        let (Some(v), Some(d), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(format_err(1, "header must be `V D`"));
        };
        let n_words: usize = v.parse().map_err(|_| format_err(1, format!("bad word count {v:?}")))?;
        let dim: usize = d.parse().map_err(|_| format_err(1, format!("bad dimension {d:?}")))?;
        if dim == 0 {
            return Err(format_err(1, "dimension must be positive"));
        }

        let mut table = Self {
            dim,
            vectors: HashMap::with_capacity(n_words),
        };
        let mut last_line = 1;
        for (line_no, line) in lines {
            last_line = line_no;
            if table.vectors.len() == n_words {
                return Err(format_err(line_no, format!("more rows than the declared {n_words}")));
            }
            let mut fields = line.split_whitespace();
            let word = fields.next().ok_or_else(|| format_err(line_no, "empty row"))?;
            let vector = fields
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| format_err(line_no, format!("non-numeric component {f:?}")))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            if vector.len() != dim {
                return Err(format_err(
                    line_no,
                    format!("expected {dim} components, found {}", vector.len()),
                ));
            }
            if table.vectors.contains_key(word) {
                return Err(EmbeddingError::DuplicateWord {
                    line: line_no,
                    word: word.to_owned(),
                });
            }
            table.vectors.insert(word.to_owned(), vector);
        }
        if table.vectors.len() != n_words {
            return Err(format_err(
                last_line,
                format!("header declares {n_words} rows, found {}", table.vectors.len()),
            ));
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, EmbeddingError> {
        let source = fs::read_to_string(path).map_err(|source| EmbeddingError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&source)
    }

    /// Writes the table back out, rows sorted by word.
    pub fn to_text(&self) -> String {
        let mut words: Vec<&String> = self.vectors.keys().collect();
        words.sort();
        let mut out = format!("{} {}\n", words.len(), self.dim);
        for w in words {
            out.push_str(w);
            for x in &self.vectors[w] {
                let _ = write!(out, " {x}");
            }
            out.push('\n');
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }
}

/// Mean of the in-vocabulary keyword vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PooledVector {
    pub values: Vec<f64>,
    /// No keyword was in the vocabulary, so `values` is all zeros.
    pub is_zero: bool,
}

impl PooledVector {
    pub fn zero(dim: usize) -> Self {
        Self {
            values: vec![0.0; dim],
            is_zero: true,
        }
    }
}

/// Averages the vectors of `keywords`, counting repeats and skipping
/// out-of-vocabulary words.
///
/// Vectors are summed in sorted keyword order so any permutation of the
/// input produces bit-identical output.
pub fn embed_keywords<S: AsRef<str>>(keywords: &[S], table: &EmbeddingTable) -> PooledVector {
    let mut known: Vec<(&str, &[f64])> = keywords
        .iter()
        .filter_map(|k| table.get(k.as_ref()).map(|v| (k.as_ref(), v)))
        .collect();
    if known.is_empty() {
        return PooledVector::zero(table.dim());
    }
    known.sort_unstable_by(|a, b| a.0.cmp(b.0));

    let mut sum = vec![0.0; table.dim()];
    for (_, v) in &known {
        for (s, x) in sum.iter_mut().zip(v.iter()) {
            *s += x;
        }
    }
    let n = known.len() as f64;
    for s in &mut sum {
        *s /= n;
    }
    PooledVector {
        values: sum,
        is_zero: false,
    }
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(u: &[f64]) -> f64 {
    dot(u, u).sqrt()
}

/// Cosine similarity; 0.0 when either vector has zero norm.
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, EmbeddingError> {
    if u.len() != v.len() {
        return Err(EmbeddingError::Dimension {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(cosine_with_norms(u, norm(u), v, norm(v)))
}

/// Cosine when both norms are already known. Lengths must match.
pub(crate) fn cosine_with_norms(u: &[f64], u_norm: f64, v: &[f64], v_norm: f64) -> f64 {
    if u_norm == 0.0 || v_norm == 0.0 {
        return 0.0;
    }
    (dot(u, v) / (u_norm * v_norm)).clamp(-1.0, 1.0)
}
