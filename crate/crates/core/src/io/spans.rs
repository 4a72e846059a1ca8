use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::EntitySpan;

/// One JSON Lines record of the span-record file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanRecord {
    pub sentence_id: u64,
    pub spans: Vec<SpanRecordSpan>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanRecordSpan {
    pub start: i64,
    pub end: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Parses a span-record file into spans per sentence id.
///
/// Records for the same id are merged; a repeated `(start, end)` keeps its
/// first occurrence. Each list is sorted by position. Bounds against the
/// sentence are checked later, when candidates are built.
pub fn parse_span_records(text: &str) -> Result<BTreeMap<usize, Vec<EntitySpan>>> {
    let mut out: BTreeMap<usize, Vec<EntitySpan>> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = Some(idx + 1);
        if line.trim().is_empty() {
            continue;
        }
        let record: SpanRecord = serde_json::from_str(line)
            .map_err(|e| Error::format(lineno, format!("malformed span record: {e}")))?;
        let id = usize::try_from(record.sentence_id)
            .map_err(|_| Error::format(lineno, "sentence_id out of range"))?;
        let list = out.entry(id).or_default();
        for s in record.spans {
            if s.start < 0 || s.end < 0 {
                return Err(Error::format(
                    lineno,
                    format!("negative index in span ({}, {})", s.start, s.end),
                ));
            }
            let span = EntitySpan::new(s.start as usize, s.end as usize, s.label)
                .map_err(|e| Error::format(lineno, e.to_string()))?;
            if !list
                .iter()
                .any(|o| o.start == span.start && o.end == span.end)
            {
                list.push(span);
            }
        }
    }
    for list in out.values_mut() {
        list.sort_by_key(|s| (s.start, s.end));
    }
    Ok(out)
}

/// Writes one record per entry, in the given order.
pub fn serialize_span_records<'a, I>(records: I) -> String
where
    I: IntoIterator<Item = (usize, &'a [EntitySpan])>,
{
    let mut out = String::new();
    for (id, spans) in records {
        let record = SpanRecord {
            sentence_id: id as u64,
            spans: spans
                .iter()
                .map(|s| SpanRecordSpan {
                    start: s.start as i64,
                    end: s.end as i64,
                    label: s.label.clone(),
                })
                .collect(),
        };
        out.push_str(&serde_json::to_string(&record).expect("span records always serialize"));
        out.push('\n');
    }
    out
}
