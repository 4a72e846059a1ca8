use crate::error::{Error, Result};
use crate::model::AlignmentSet;

fn index(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses one line of whitespace-separated `i-j` pairs.
pub fn parse_pharaoh(line: &str) -> Result<AlignmentSet> {
    line.split_whitespace()
        .map(|tok| {
            tok.split_once('-')
                .and_then(|(i, j)| Some((index(i)?, index(j)?)))
                .ok_or_else(|| Error::format(None, format!("invalid alignment pair {tok:?}")))
        })
        .collect()
}

/// One alignment set per line, in line order.
pub fn parse_alignment_file(text: &str) -> Result<Vec<AlignmentSet>> {
    text.lines()
        .enumerate()
        .map(|(i, line)| {
            parse_pharaoh(line).map_err(|e| match e {
                Error::Format { message, .. } => Error::format(Some(i + 1), message),
                other => other,
            })
        })
        .collect()
}

/// Pairs in ascending `(i, j)` order.
pub fn serialize_pharaoh(align: &AlignmentSet) -> String {
    align
        .iter()
        .map(|(i, j)| format!("{i}-{j}"))
        .collect::<Vec<_>>()
        .join(" ")
}
