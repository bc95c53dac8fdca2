/// Thai vowel and tone marks that attach to a preceding consonant.
///
/// These are the code points that may be left "dangling" after a bad copy
/// or a stray keystroke: U+0E31, U+0E34..=U+0E3A and U+0E47..=U+0E4E.
pub fn is_combining_mark(c: char) -> bool {
    matches!(c, '\u{0E31}' | '\u{0E34}'..='\u{0E3A}' | '\u{0E47}'..='\u{0E4E}')
}

/// Characters whose repeated runs are squeezed to a single occurrence.
fn is_squeezable(c: char) -> bool {
    is_combining_mark(c) || c == '?' || c == 'ๆ'
}

/// Normalizes raw user or document text.
///
/// Whitespace runs become one ASCII space and the ends are trimmed. Combining
/// marks at the start of the text or right after a space are dropped, and runs
/// of the same combining mark, `?` or `ๆ` are squeezed to one character.
///
/// The output never contains a dangling mark or a squeezable run, so applying
/// the function twice gives the same result as applying it once.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    let mut last: Option<char> = None;

    for c in text.chars() {
        if c.is_whitespace() {
            pending_space = last.is_some();
            continue;
        }
        if is_combining_mark(c) && (last.is_none() || pending_space) {
            continue;
        }
        if !pending_space && is_squeezable(c) && last == Some(c) {
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        out.push(c);
        last = Some(c);
    }
    out
}
