use std::fmt;

use thiserror::Error;

/// Broad failure classes, used by the CLI to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Infeasible,
}

/// Compact `(start, end)` rendering for spans inside error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanRef(pub usize, pub usize);

impl fmt::Display for SpanRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid span {span}: end must exceed start")]
    EmptySpan { span: SpanRef },

    #[error("span {span} exceeds sentence length {len}")]
    SpanOutOfBounds { span: SpanRef, len: usize },

    #[error("sentence {sentence_id}: span {span} exceeds sentence length {len}")]
    CandidateOutOfBounds {
        sentence_id: usize,
        span: SpanRef,
        len: usize,
    },

    #[error("invalid label {0:?}: labels must be non-empty and contain no whitespace")]
    InvalidLabel(String),

    #[error("invalid token {0:?}: tokens must be non-empty and contain no whitespace")]
    InvalidToken(String),

    #[error("overlapping entities {first} and {second} cannot form a flat annotation")]
    OverlappingEntities { first: SpanRef, second: SpanRef },

    #[error("sentence {sentence_id}: external candidates {first} and {second} overlap")]
    OverlappingCandidates {
        sentence_id: usize,
        first: SpanRef,
        second: SpanRef,
    },

    #[error("sentence {0} is empty")]
    EmptySentence(usize),

    #[error("{}", line.map(|l| format!("line {l}: {message}")).unwrap_or_else(|| message.clone()))]
    Format { line: Option<usize>, message: String },

    #[error(
        "alignment pair {labeled}-{target} out of bounds (labeled length {labeled_len}, target length {target_len})"
    )]
    AlignmentOutOfBounds {
        labeled: usize,
        target: usize,
        labeled_len: usize,
        target_len: usize,
    },

    #[error("the greedy solver cannot guarantee every source is projected; use an exact solver for require-all mode")]
    GreedyRequireAll,

    #[error(
        "brute-force guard exceeded: {sources} sources x {candidates} candidates (limit {max_sources} x {max_candidates})"
    )]
    GuardExceeded {
        sources: usize,
        candidates: usize,
        max_sources: usize,
        max_candidates: usize,
    },

    #[error("no feasible assignment projects every source; uncoverable sources: {uncovered:?}")]
    Infeasible { uncovered: Vec<usize> },

    #[error("candidates {first} and {second} overlap; the assignment solver needs disjoint candidates (use greedy or brute force)")]
    CandidatesNotDisjoint { first: SpanRef, second: SpanRef },

    #[error("cost denominators too large for exact integer arithmetic")]
    Overflow,

    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Mismatch(String),

    #[error("sentence {sentence_id}: {source}")]
    InSentence {
        sentence_id: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn format(line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }

    /// Tags the error with the corpus sentence it came from.
    pub fn in_sentence(self, sentence_id: usize) -> Self {
        match self {
            e @ Error::InSentence { .. } => e,
            e => Error::InSentence {
                sentence_id,
                source: Box::new(e),
            },
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InSentence { source, .. } => source.kind(),
            Error::Config(_) | Error::GreedyRequireAll => ErrorKind::Usage,
            Error::GuardExceeded { .. }
            | Error::Infeasible { .. }
            | Error::Overflow => ErrorKind::Infeasible,
            _ => ErrorKind::Data,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
