//! Norvig-style spelling correction over a frequency lexicon.

use std::cmp::Ordering;

use super::Lexicon;

/// Returns the best lexicon word within two edits of `token`.
///
/// Known words are returned as-is. Otherwise the distance-1 candidates
/// (delete, transpose, replace, insert over the lexicon alphabet) that are in
/// the lexicon compete by frequency, falling back to distance 2, then to the
/// token itself. Frequency ties go to the smallest candidate in code-point
/// order.
pub fn correct_spelling(token: &str, lexicon: &Lexicon) -> String {
    if token.is_empty() || lexicon.contains(token) {
        return token.to_owned();
    }
    let chars: Vec<char> = token.chars().collect();
    let len = chars.len();
    let mut best = Best::default();
    let mut buf = String::new();

    if within(lexicon, len, 1) {
        for_each_edit(&chars, lexicon, 0, |edit| best.offer(edit, lexicon, &mut buf));
    }
    if let Some(word) = best.word {
        return word;
    }

    if within(lexicon, len, 2) {
        for_each_edit(&chars, lexicon, 1, |first| {
            let first = first.to_vec();
            for_each_edit(&first, lexicon, 0, |second| best.offer(second, lexicon, &mut buf));
        });
    }
    best.word.unwrap_or_else(|| token.to_owned())
}

#[derive(Default)]
struct Best {
    word: Option<String>,
    frequency: u64,
}

impl Best {
    fn offer(&mut self, candidate: &[char], lexicon: &Lexicon, buf: &mut String) {
        buf.clear();
        buf.extend(candidate);
        let Some(freq) = lexicon.frequency(buf) else {
            return;
        };
        let better = match &self.word {
            None => true,
            Some(current) => match freq.cmp(&self.frequency) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => buf.as_str() < current.as_str(),
            },
        };
        if better {
            self.word = Some(buf.clone());
            self.frequency = freq;
        }
    }
}

/// True if some lexicon entry is within `slack` chars of length `len`.
fn within(lexicon: &Lexicon, len: usize, slack: usize) -> bool {
    (len.saturating_sub(slack)..=len + slack).any(|l| lexicon.has_length(l))
}

/// Calls `f` with every single-edit variant of `word`. Variants may repeat.
/// Variants that cannot reach a lexicon length within `slack` further edits
/// are skipped.
fn for_each_edit(word: &[char], lexicon: &Lexicon, slack: usize, mut f: impl FnMut(&[char])) {
    let n = word.len();
    let alphabet = lexicon.alphabet();
    let mut scratch: Vec<char> = Vec::with_capacity(n + 1);

    if n > 0 && within(lexicon, n - 1, slack) {
        for i in 0..n {
            scratch.clear();
            scratch.extend_from_slice(&word[..i]);
            scratch.extend_from_slice(&word[i + 1..]);
            f(&scratch);
        }
    }
    if within(lexicon, n, slack) {
        for i in 0..n.saturating_sub(1) {
            scratch.clear();
            scratch.extend_from_slice(word);
            scratch.swap(i, i + 1);
            f(&scratch);
        }
        for i in 0..n {
            scratch.clear();
            scratch.extend_from_slice(word);
            for &c in alphabet {
                scratch[i] = c;
                f(&scratch);
            }
        }
    }
    if within(lexicon, n + 1, slack) {
        for i in 0..=n {
            scratch.clear();
            scratch.extend_from_slice(&word[..i]);
            scratch.push(alphabet[0]);
            scratch.extend_from_slice(&word[i..]);
            for &c in alphabet {
                scratch[i] = c;
                f(&scratch);
            }
        }
    }
}
