use super::Lexicon;

/// Greedy longest-match segmentation against the lexicon.
///
/// Whitespace separates chunks and never appears in a token. Inside a chunk,
/// the longest lexicon word starting at the cursor is taken; characters where
/// no word starts accumulate into a single unknown token.
pub fn tokenize(text: &str, lexicon: &Lexicon) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in text.split(char::is_whitespace).filter(|c| !c.is_empty()) {
        segment_chunk(chunk, lexicon, &mut tokens);
    }
    tokens
}

fn segment_chunk(chunk: &str, lexicon: &Lexicon, out: &mut Vec<String>) {
    // byte offset of every char boundary, including the end
    let bounds: Vec<usize> = chunk
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(chunk.len()))
        .collect();
    let n_chars = bounds.len() - 1;
    let max_len = lexicon.max_word_chars();

    let mut unknown_start: Option<usize> = None;
    let mut pos = 0;
    while pos < n_chars {
        let longest = (1..=max_len.min(n_chars - pos))
            .rev()
            .find(|&len| lexicon.contains(&chunk[bounds[pos]..bounds[pos + len]]));
        match longest {
            Some(len) => {
                if let Some(start) = unknown_start.take() {
                    out.push(chunk[bounds[start]..bounds[pos]].to_owned());
                }
                out.push(chunk[bounds[pos]..bounds[pos + len]].to_owned());
                pos += len;
            }
            None => {
                unknown_start.get_or_insert(pos);
                pos += 1;
            }
        }
    }
    if let Some(start) = unknown_start {
        out.push(chunk[bounds[start]..].to_owned());
    }
}
