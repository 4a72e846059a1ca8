//! Target candidate extraction: every contiguous n-gram, or spans predicted
//! by an external NER model.

use crate::error::{Error, Result};
use crate::model::{EntitySpan, Sentence};

/// N-gram length cap used when none is configured.
pub const DEFAULT_MAX_NGRAM: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateSource {
    Ngram,
    ExternalNer,
}

/// Unlabeled target spans for one sentence, sorted by `(start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    pub sentence_id: usize,
    pub sentence_len: usize,
    pub spans: Vec<EntitySpan>,
    pub source: CandidateSource,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// True when no two candidates share a word.
    pub fn is_disjoint(&self) -> bool {
        self.first_overlap().is_none()
    }

    pub(crate) fn first_overlap(&self) -> Option<(&EntitySpan, &EntitySpan)> {
        for (i, a) in self.spans.iter().enumerate() {
            for b in &self.spans[i + 1..] {
                if a.overlaps(b) {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// All word sequences of length `1..=max_len` (`None` = no cap).
pub fn ngram_candidates(sentence: &Sentence, max_len: Option<usize>) -> Result<CandidateSet> {
    if max_len == Some(0) {
        return Err(Error::Config("maximum n-gram length must be at least 1".into()));
    }
    let n = sentence.len();
    if n == 0 {
        return Err(Error::EmptySentence(sentence.id()));
    }
    let cap = max_len.map_or(n, |m| m.min(n));
    let mut spans = Vec::with_capacity(cap * n);
    for start in 0..n {
        for end in start + 1..=(start + cap).min(n) {
            spans.push(EntitySpan {
                start,
                end,
                label: None,
            });
        }
    }
    Ok(CandidateSet {
        sentence_id: sentence.id(),
        sentence_len: n,
        spans,
        source: CandidateSource::Ngram,
    })
}

/// Validates externally predicted spans and strips their labels.
pub fn external_candidates(sentence: &Sentence, spans: &[EntitySpan]) -> Result<CandidateSet> {
    let id = sentence.id();
    let mut out: Vec<EntitySpan> = Vec::with_capacity(spans.len());
    for s in spans {
        if s.end > sentence.len() {
            return Err(Error::CandidateOutOfBounds {
                sentence_id: id,
                span: s.bounds(),
                len: sentence.len(),
            });
        }
        out.push(s.unlabeled());
    }
    out.sort();
    out.dedup();
    let set = CandidateSet {
        sentence_id: id,
        sentence_len: sentence.len(),
        spans: out,
        source: CandidateSource::ExternalNer,
    };
    if let Some((a, b)) = set.first_overlap() {
        return Err(Error::OverlappingCandidates {
            sentence_id: id,
            first: a.bounds(),
            second: b.bounds(),
        });
    }
    Ok(set)
}
