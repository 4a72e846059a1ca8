use crate::error::{Error, Result};
use crate::model::{bio_decode, parse_tag, LabeledSentence, Sentence};

/// A corpus of sentences with ids `0..n` in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusDocument {
    pub sentences: Vec<LabeledSentence>,
}

impl CorpusDocument {
    pub fn new(sentences: Vec<LabeledSentence>) -> Self {
        CorpusDocument { sentences }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

struct Block {
    first_line: usize,
    tokens: Vec<String>,
    tags: Vec<String>,
}

fn finish(block: Block, id: usize) -> Result<LabeledSentence> {
    let spans = bio_decode(&block.tags).map_err(|e| match e {
        Error::Format { message, .. } => Error::format(Some(block.first_line), message),
        other => other,
    })?;
    let sentence = Sentence::new(id, block.tokens)?;
    LabeledSentence::new(sentence, spans)
}

/// Parses `token<whitespace>tag` lines with blank-line sentence separators.
/// A line holding only a token is read as tag `O`.
pub fn parse_conll(text: &str) -> Result<CorpusDocument> {
    let mut sentences = Vec::new();
    let mut block: Option<Block> = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            if let Some(b) = block.take() {
                sentences.push(finish(b, sentences.len())?);
            }
            continue;
        }
        if fields.len() > 2 {
            return Err(Error::format(
                Some(lineno),
                format!("expected `token tag`, found {} fields", fields.len()),
            ));
        }
        let tag = fields.get(1).copied().unwrap_or("O");
        if parse_tag(tag).is_none() {
            return Err(Error::format(
                Some(lineno),
                format!("tag {tag:?} is not O, B-<label> or I-<label>"),
            ));
        }
        let b = block.get_or_insert_with(|| Block {
            first_line: lineno,
            tokens: Vec::new(),
            tags: Vec::new(),
        });
        b.tokens.push(fields[0].to_owned());
        b.tags.push(tag.to_owned());
    }
    if let Some(b) = block.take() {
        sentences.push(finish(b, sentences.len())?);
    }
    Ok(CorpusDocument { sentences })
}

/// Writes one `token tag` line per word and a blank line after each sentence.
pub fn serialize_conll(doc: &CorpusDocument) -> String {
    let mut out = String::new();
    for s in &doc.sentences {
        for (token, tag) in s.sentence().tokens().iter().zip(s.tags()) {
            out.push_str(token);
            out.push(' ');
            out.push_str(&tag);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}
