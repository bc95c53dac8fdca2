use serde::{Deserialize, Serialize};

use super::{IngestError, SourceEntry};

/// Lines starting with these two bytes open a new section.
pub const HEADING_MARKER: &str = "# ";

/// One heading and the text under it, before any language processing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSection {
    pub doc_id: String,
    pub country: String,
    pub heading_text: String,
    /// Terminator of the heading line: `"\n"`, `"\r\n"` or empty at end of file.
    #[serde(default)]
    pub heading_eol: String,
    /// Verbatim text between the heading line and the next heading line,
    /// line terminators included.
    pub body_text: String,
    pub uri: String,
}

/// Stable id for the `ordinal`-th (1-based) heading of a source.
pub fn doc_id(title: &str, ordinal: usize) -> String {
    format!("{title}#{ordinal}")
}

/// Splits a source file at heading-marker lines.
///
/// Text before the first heading is dropped. Concatenating
/// `"# " + heading_text + heading_eol + body_text` over the sections gives
/// back the file from its first marker on.
pub fn segment_document(source_text: &str, entry: &SourceEntry) -> Result<Vec<RawSection>, IngestError> {
    struct Open<'a> {
        heading: &'a str,
        eol: &'a str,
        body_start: usize,
    }

    let mut sections = Vec::new();
    let mut current: Option<Open> = None;
    let mut line_start = 0;

    let close = |open: Open, end: usize, sections: &mut Vec<RawSection>| {
        let ordinal = sections.len() + 1;
        sections.push(RawSection {
            doc_id: doc_id(&entry.title, ordinal),
            country: entry.country.clone(),
            heading_text: open.heading.to_owned(),
            heading_eol: open.eol.to_owned(),
            body_text: source_text[open.body_start..end].to_owned(),
            uri: entry
                .uri
                .as_deref()
                .map(|u| format!("{u}#section-{ordinal}"))
                .unwrap_or_default(),
        });
    };

    for (line_no, line) in source_text.split_inclusive('\n').enumerate() {
        let start = line_start;
        line_start += line.len();
        let Some(rest) = line.strip_prefix(HEADING_MARKER) else {
            continue;
        };
        let heading = rest.trim_end_matches('\n').trim_end_matches('\r');
        if heading.trim().is_empty() {
            return Err(IngestError::EmptyHeading {
                path: entry.path.clone(),
                line: line_no + 1,
            });
        }
        if let Some(open) = current.take() {
            close(open, start, &mut sections);
        }
        current = Some(Open {
            heading,
            eol: &rest[heading.len()..],
            body_start: line_start,
        });
    }
    match current {
        Some(open) => close(open, source_text.len(), &mut sections),
        None => return Err(IngestError::NoHeadings(entry.path.clone())),
    }
    Ok(sections)
}

/// Inverse of [`segment_document`].
pub fn reassemble(sections: &[RawSection]) -> String {
    sections
        .iter()
        .map(|s| format!("{HEADING_MARKER}{}{}{}", s.heading_text, s.heading_eol, s.body_text))
        .collect()
}
