//! Annotation projection for cross-lingual named entity recognition.
//!
//! Labels on a source (or back-translated) sentence are carried over to a
//! target sentence through word alignments, either with a span-heuristic or
//! by matching source entities against extracted target candidates.

pub mod candidates;
pub mod cli;
pub mod error;
pub mod eval;
pub mod io;
pub mod matching;
pub mod model;
pub mod projection;

pub use error::{Error, ErrorKind, Result};
pub use model::{
    bio_decode, bio_encode, spans_overlap, AlignmentSet, EntitySpan, LabeledSentence, Rational,
    Sentence,
};
