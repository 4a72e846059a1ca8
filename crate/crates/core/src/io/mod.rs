//! Readers and writers for the external file formats.

mod conll;
mod marked;
mod pharaoh;
mod spans;

use std::path::Path;

pub use conll::{parse_conll, serialize_conll, CorpusDocument};
pub use marked::{parse_marked_sentence, parse_translations, EntityTranslation, MarkedSentence};
pub use pharaoh::{parse_alignment_file, parse_pharaoh, serialize_pharaoh};
pub use spans::{parse_span_records, serialize_span_records, SpanRecord, SpanRecordSpan};

use crate::error::{Error, Result};

/// Reads a UTF-8 file; malformed byte sequences are an error.
pub fn read_text(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    String::from_utf8(bytes).map_err(|e| {
        Error::format(
            None,
            format!(
                "{}: invalid UTF-8 at byte {}",
                path.display(),
                e.utf8_error().valid_up_to()
            ),
        )
    })
}
