//! Turning alignments into labeled target sentences.
//!
//! Two projection methods share one signature: the labeled side comes first,
//! then the target sentence, then alignments from labeled to target words.
//! The same code serves source-to-target and back-translated-to-original
//! alignments. Marker recovery labels a back-translated sentence from its
//! bracketed spans before it is projected.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::candidates::{
    external_candidates, ngram_candidates, CandidateSource, DEFAULT_MAX_NGRAM,
};
use crate::error::{Error, Result};
use crate::io::MarkedSentence;
use crate::matching::{build_problem, solve, MatchMode, Solver};
use crate::model::{AlignmentSet, EntitySpan, LabeledSentence, Rational, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    Heuristic,
    #[default]
    CandidateMatching,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heuristic" => Ok(Method::Heuristic),
            "matching" => Ok(Method::CandidateMatching),
            _ => Err(Error::Config(format!(
                "unknown method {s:?} (expected heuristic|matching)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Heuristic => "heuristic",
            Method::CandidateMatching => "matching",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionConfig {
    pub method: Method,
    pub candidate_source: CandidateSource,
    pub solver: Solver,
    /// Minimum share of aligned words in a heuristic span.
    pub ratio_threshold: Rational,
    /// `None` enumerates n-grams of every length.
    pub max_ngram_len: Option<usize>,
    pub mode: MatchMode,
    /// Minimum fuzzy similarity for marker label recovery.
    pub min_similarity: Rational,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig {
            method: Method::CandidateMatching,
            candidate_source: CandidateSource::Ngram,
            solver: Solver::Greedy,
            ratio_threshold: Rational::new(4, 5),
            max_ngram_len: Some(DEFAULT_MAX_NGRAM),
            mode: MatchMode::AtMostOne,
            min_similarity: Rational::new(1, 2),
        }
    }
}

impl ProjectionConfig {
    pub fn validate(&self) -> Result<()> {
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        if self.ratio_threshold == zero || self.ratio_threshold > one {
            return Err(Error::Config(format!(
                "ratio threshold {} must lie in (0, 1]",
                self.ratio_threshold
            )));
        }
        if self.min_similarity > one {
            return Err(Error::Config(format!(
                "minimum similarity {} must lie in [0, 1]",
                self.min_similarity
            )));
        }
        if self.max_ngram_len == Some(0) {
            return Err(Error::Config("maximum n-gram length must be at least 1".into()));
        }
        if self.method == Method::Heuristic {
            return Ok(());
        }
        if self.solver == Solver::Assignment && self.candidate_source != CandidateSource::ExternalNer
        {
            return Err(Error::Config(
                "the assignment solver needs external NER candidates".into(),
            ));
        }
        if self.solver == Solver::Greedy && self.mode == MatchMode::RequireAll {
            return Err(Error::GreedyRequireAll);
        }
        Ok(())
    }
}

/// Indices of the longest run of consecutive integers in `sorted`; the
/// leftmost run wins ties.
fn longest_run(sorted: &[usize]) -> (usize, usize) {
    let (mut best_start, mut best_len) = (0, 0);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[j - 1] + 1 {
            j += 1;
        }
        if j - i > best_len {
            best_start = i;
            best_len = j - i;
        }
        i = j;
    }
    (sorted[best_start], sorted[best_start + best_len - 1] + 1)
}

/// Projects each entity onto the span covering its aligned target words.
///
/// When fewer than `threshold` of the covered words are aligned, the span
/// shrinks to the longest contiguous run of aligned words. Entities without
/// alignments are dropped, and a span colliding with one already projected
/// from an earlier entity is dropped too.
pub fn project_heuristic(
    labeled: &LabeledSentence,
    target: &Sentence,
    align: &AlignmentSet,
    threshold: Rational,
) -> Result<LabeledSentence> {
    align.check_bounds(labeled.sentence().len(), target.len())?;
    let mut projected: Vec<EntitySpan> = Vec::new();
    for entity in labeled.entities() {
        let aligned: Vec<usize> = align.targets_of(entity).into_iter().collect();
        let (Some(&lo), Some(&hi)) = (aligned.first(), aligned.last()) else {
            continue;
        };
        let full = hi + 1 - lo;
        let ratio = Rational::new(aligned.len() as u128, full as u128);
        let (start, end) = if ratio < threshold {
            longest_run(&aligned)
        } else {
            (lo, hi + 1)
        };
        let span = EntitySpan {
            start,
            end,
            label: entity.label.clone(),
        };
        if projected.iter().all(|p| !p.overlaps(&span)) {
            projected.push(span);
        }
    }
    LabeledSentence::new(target.clone(), projected)
}

/// Projects entities by matching them against target candidates.
///
/// `external_spans` supplies the NER candidates and is required when the
/// configuration asks for them.
pub fn project_matching(
    labeled: &LabeledSentence,
    target: &Sentence,
    align: &AlignmentSet,
    cfg: &ProjectionConfig,
    external_spans: Option<&[EntitySpan]>,
) -> Result<LabeledSentence> {
    cfg.validate()?;
    if labeled.entities().is_empty() {
        align.check_bounds(labeled.sentence().len(), target.len())?;
        return Ok(LabeledSentence::unlabeled(target.clone()));
    }
    let candidates = match cfg.candidate_source {
        CandidateSource::Ngram => ngram_candidates(target, cfg.max_ngram_len)?,
        CandidateSource::ExternalNer => {
            let spans = external_spans.ok_or_else(|| {
                Error::Config("external NER candidates were requested but not supplied".into())
            })?;
            external_candidates(target, spans)?
        }
    };
    let problem = build_problem(labeled, candidates, align, cfg.mode)?;
    let solution = solve(&problem, cfg.solver)?;
    let spans = solution
        .assignments
        .iter()
        .map(|&(s, t)| {
            problem.candidate_spans()[t].with_label(problem.sources()[s].label.clone())
        })
        .collect();
    LabeledSentence::new(target.clone(), spans)
}

/// Runs whichever method `cfg` selects.
pub fn project(
    labeled: &LabeledSentence,
    target: &Sentence,
    align: &AlignmentSet,
    cfg: &ProjectionConfig,
    external_spans: Option<&[EntitySpan]>,
) -> Result<LabeledSentence> {
    match cfg.method {
        Method::Heuristic => {
            cfg.validate()?;
            project_heuristic(labeled, target, align, cfg.ratio_threshold)
        }
        Method::CandidateMatching => project_matching(labeled, target, align, cfg, external_spans),
    }
}

/// `1 - d / max(|a|, |b|)` with `d` the character edit distance of the
/// lowercased strings. Two empty strings are identical.
pub fn fuzzy_similarity(a: &str, b: &str) -> Rational {
    let a = a.to_lowercase();
    let b = b.to_lowercase();
    let longest = a.chars().count().max(b.chars().count());
    if longest == 0 {
        return Rational::from_integer(1);
    }
    let distance = strsim::levenshtein(&a, &b);
    Rational::new((longest - distance) as u128, longest as u128)
}

/// Labels the bracketed spans of a back-translated sentence from the entity
/// translations.
///
/// Every (span, translation) pair is scored; pairs are accepted in order of
/// descending similarity while both sides are unused and the score reaches
/// `min_similarity`. Spans left without a translation are dropped.
pub fn assign_marker_labels(marked: &MarkedSentence, min_similarity: Rational) -> Result<LabeledSentence> {
    let texts: Vec<String> = marked
        .bracket_spans
        .iter()
        .map(|s| marked.sentence.text_of(s))
        .collect();
    let mut scored: Vec<(Rational, usize, usize)> = Vec::new();
    for (b, text) in texts.iter().enumerate() {
        for (t, tr) in marked.entity_translations.iter().enumerate() {
            let sim = fuzzy_similarity(text, &tr.text);
            if sim >= min_similarity {
                scored.push((sim, b, t));
            }
        }
    }
    scored.sort_by(|x, y| y.0.cmp(&x.0).then((x.1, x.2).cmp(&(y.1, y.2))));

    let mut bracket_done = BTreeSet::new();
    let mut translation_used = BTreeSet::new();
    let mut entities = Vec::new();
    for (_, b, t) in scored {
        if bracket_done.contains(&b) || translation_used.contains(&t) {
            continue;
        }
        bracket_done.insert(b);
        translation_used.insert(t);
        let label = marked.entity_translations[t].label.clone();
        entities.push(marked.bracket_spans[b].with_label(Some(label)));
    }
    LabeledSentence::new(marked.sentence.clone(), entities)
}
