use crate::error::{Error, Result};
use crate::model::{EntitySpan, Sentence};

/// Label and target-language surface text of one source entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityTranslation {
    pub label: String,
    pub text: String,
}

/// A back-translated sentence with its `[`/`]` markers turned into spans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedSentence {
    pub sentence: Sentence,
    pub bracket_spans: Vec<EntitySpan>,
    pub entity_translations: Vec<EntityTranslation>,
}

/// Strips square-bracket markers from `raw` and records the word range each
/// pair enclosed. A bracket attached to a word binds to that word.
pub fn parse_marked_sentence(
    raw: &str,
    entity_translations: Vec<EntityTranslation>,
) -> Result<MarkedSentence> {
    let mut tokens: Vec<String> = Vec::new();
    let mut spans = Vec::new();
    let mut open: Option<usize> = None;
    for piece in raw.split_whitespace() {
        let mut word = String::new();
        for ch in piece.chars() {
            match ch {
                '[' => {
                    if open.is_some() {
                        return Err(Error::format(None, "nested `[` marker"));
                    }
                    open = Some(tokens.len());
                }
                ']' => {
                    let start = open
                        .take()
                        .ok_or_else(|| Error::format(None, "`]` without matching `[`"))?;
                    let end = tokens.len() + usize::from(!word.is_empty());
                    if end <= start {
                        return Err(Error::format(None, "marker pair encloses no word"));
                    }
                    spans.push(EntitySpan::candidate(start, end)?);
                }
                c => word.push(c),
            }
        }
        if !word.is_empty() {
            tokens.push(word);
        }
    }
    if open.is_some() {
        return Err(Error::format(None, "unclosed `[` marker"));
    }
    Ok(MarkedSentence {
        sentence: Sentence::new(0, tokens)?,
        bracket_spans: spans,
        entity_translations,
    })
}

/// Parses one companion line: `label<TAB>text` entries joined by `|||`.
pub fn parse_translations(line: &str) -> Result<Vec<EntityTranslation>> {
    if line.trim().is_empty() {
        return Ok(Vec::new());
    }
    line.split("|||")
        .map(|entry| {
            let entry = entry.trim_matches(|c: char| c == ' ' || c == '\r' || c == '\n');
            let (label, text) = entry.split_once('\t').ok_or_else(|| {
                Error::format(None, format!("translation entry {entry:?} lacks `label<TAB>text`"))
            })?;
            let label = label.trim();
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(Error::InvalidLabel(label.to_owned()));
            }
            Ok(EntityTranslation {
                label: label.to_owned(),
                text: text.trim().to_owned(),
            })
        })
        .collect()
}
