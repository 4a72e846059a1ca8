//! Sentences, spans, alignments and the BIO span algebra shared by every
//! other module.
//!
//! All word indices are 0-based. Spans are half-open `[start, end)`, so
//! `end - start` is the number of words they cover.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result, SpanRef};

/// Exact rational used for matching costs, objectives, thresholds and scores.
pub type Rational = Ratio<u128>;

fn valid_atom(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(char::is_whitespace)
}

/// An ordered list of word tokens with a stable identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    id: usize,
    tokens: Vec<String>,
}

impl Sentence {
    pub fn new<I, S>(id: usize, tokens: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if let Some(bad) = tokens.iter().find(|t| !valid_atom(t)) {
            return Err(Error::InvalidToken(bad.clone()));
        }
        Ok(Sentence { id, tokens })
    }

    /// Whitespace tokenization of `text`.
    pub fn from_text(id: usize, text: &str) -> Self {
        Sentence {
            id,
            tokens: text.split_whitespace().map(str::to_owned).collect(),
        }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Surface text of `span`, words joined by single spaces.
    pub fn text_of(&self, span: &EntitySpan) -> String {
        self.tokens[span.start..span.end].join(" ")
    }

    pub(crate) fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }
}

/// A contiguous word range, optionally carrying an entity label.
///
/// Unlabeled spans (`label == None`) are target candidates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub label: Option<String>,
}

impl EntitySpan {
    pub fn new(start: usize, end: usize, label: Option<String>) -> Result<Self> {
        if end <= start {
            return Err(Error::EmptySpan {
                span: SpanRef(start, end),
            });
        }
        if let Some(l) = &label {
            if !valid_atom(l) {
                return Err(Error::InvalidLabel(l.clone()));
            }
        }
        Ok(EntitySpan { start, end, label })
    }

    pub fn labeled(start: usize, end: usize, label: impl Into<String>) -> Result<Self> {
        Self::new(start, end, Some(label.into()))
    }

    pub fn candidate(start: usize, end: usize) -> Result<Self> {
        Self::new(start, end, None)
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index < self.end
    }

    pub fn overlaps(&self, other: &EntitySpan) -> bool {
        spans_overlap(self, other)
    }

    pub fn bounds(&self) -> SpanRef {
        SpanRef(self.start, self.end)
    }

    pub fn check_within(&self, len: usize) -> Result<()> {
        if self.end > len {
            Err(Error::SpanOutOfBounds {
                span: self.bounds(),
                len,
            })
        } else {
            Ok(())
        }
    }

    /// Same range with the label erased.
    pub fn unlabeled(&self) -> EntitySpan {
        EntitySpan {
            start: self.start,
            end: self.end,
            label: None,
        }
    }

    pub fn with_label(&self, label: Option<String>) -> EntitySpan {
        EntitySpan {
            start: self.start,
            end: self.end,
            label,
        }
    }
}

impl fmt::Display for EntitySpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "({}, {}, {})", self.start, self.end, l),
            None => write!(f, "({}, {})", self.start, self.end),
        }
    }
}

/// True iff the half-open intervals share at least one word.
pub fn spans_overlap(a: &EntitySpan, b: &EntitySpan) -> bool {
    a.start < b.end && b.start < a.end
}

/// Word-to-word links between a labeled sentence and a target sentence.
///
/// Pairs are `(labeled_index, target_index)`; iteration is in ascending order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlignmentSet {
    pairs: BTreeSet<(usize, usize)>,
}

impl AlignmentSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, labeled: usize, target: usize) -> bool {
        self.pairs.insert((labeled, target))
    }

    pub fn contains(&self, labeled: usize, target: usize) -> bool {
        self.pairs.contains(&(labeled, target))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn check_bounds(&self, labeled_len: usize, target_len: usize) -> Result<()> {
        match self
            .iter()
            .find(|&(i, j)| i >= labeled_len || j >= target_len)
        {
            Some((labeled, target)) => Err(Error::AlignmentOutOfBounds {
                labeled,
                target,
                labeled_len,
                target_len,
            }),
            None => Ok(()),
        }
    }

    /// Number of links with the labeled end inside `src` and the target end
    /// inside `tgt`.
    pub fn count_between(&self, src: &EntitySpan, tgt: &EntitySpan) -> usize {
        self.pairs
            .range((src.start, 0)..(src.end, 0))
            .filter(|&&(_, j)| tgt.contains(j))
            .count()
    }

    /// Target indices linked to any word of `src`, ascending.
    pub fn targets_of(&self, src: &EntitySpan) -> BTreeSet<usize> {
        self.pairs
            .range((src.start, 0)..(src.end, 0))
            .map(|&(_, j)| j)
            .collect()
    }
}

impl FromIterator<(usize, usize)> for AlignmentSet {
    fn from_iter<T: IntoIterator<Item = (usize, usize)>>(iter: T) -> Self {
        AlignmentSet {
            pairs: iter.into_iter().collect(),
        }
    }
}

/// A sentence with its flat entity annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSentence {
    sentence: Sentence,
    entities: Vec<EntitySpan>,
}

impl LabeledSentence {
    /// Entities are sorted by start; they must be labeled, in bounds and
    /// pairwise disjoint.
    pub fn new(sentence: Sentence, mut entities: Vec<EntitySpan>) -> Result<Self> {
        entities.sort();
        for e in &entities {
            if e.label.is_none() {
                return Err(Error::InvalidLabel(String::new()));
            }
            e.check_within(sentence.len())?;
        }
        check_disjoint(&entities)?;
        Ok(LabeledSentence { sentence, entities })
    }

    pub fn unlabeled(sentence: Sentence) -> Self {
        LabeledSentence {
            sentence,
            entities: Vec::new(),
        }
    }

    pub fn sentence(&self) -> &Sentence {
        &self.sentence
    }

    pub fn entities(&self) -> &[EntitySpan] {
        &self.entities
    }

    pub fn tags(&self) -> Vec<String> {
        bio_encode(&self.entities, self.sentence.len())
            .expect("labeled sentence entities are disjoint and in bounds")
    }
}

/// Checks a start-sorted span list for overlaps.
fn check_disjoint(sorted: &[EntitySpan]) -> Result<()> {
    for w in sorted.windows(2) {
        if w[0].overlaps(&w[1]) {
            return Err(Error::OverlappingEntities {
                first: w[0].bounds(),
                second: w[1].bounds(),
            });
        }
    }
    Ok(())
}

/// Encodes a flat annotation as one BIO tag per word.
pub fn bio_encode(entities: &[EntitySpan], length: usize) -> Result<Vec<String>> {
    let mut sorted: Vec<&EntitySpan> = entities.iter().collect();
    sorted.sort();
    for w in sorted.windows(2) {
        if w[0].overlaps(w[1]) {
            return Err(Error::OverlappingEntities {
                first: w[0].bounds(),
                second: w[1].bounds(),
            });
        }
    }
    let mut tags = vec!["O".to_owned(); length];
    for e in sorted {
        e.check_within(length)?;
        let label = e
            .label
            .as_deref()
            .ok_or_else(|| Error::InvalidLabel(String::new()))?;
        tags[e.start] = format!("B-{label}");
        for tag in &mut tags[e.start + 1..e.end] {
            *tag = format!("I-{label}");
        }
    }
    Ok(tags)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tag<'a> {
    Outside,
    Begin(&'a str),
    Inside(&'a str),
}

pub(crate) fn parse_tag(tag: &str) -> Option<Tag<'_>> {
    if tag == "O" {
        return Some(Tag::Outside);
    }
    let (prefix, label) = tag.split_once('-')?;
    if !valid_atom(label) {
        return None;
    }
    match prefix {
        "B" => Some(Tag::Begin(label)),
        "I" => Some(Tag::Inside(label)),
        _ => None,
    }
}

/// Decodes BIO tags into spans. An `I-X` that does not continue an open `X`
/// span starts a new one.
pub fn bio_decode<S: AsRef<str>>(tags: &[S]) -> Result<Vec<EntitySpan>> {
    let mut spans = Vec::new();
    let mut open: Option<(usize, &str)> = None;
    for (i, raw) in tags.iter().enumerate() {
        let raw = raw.as_ref();
        let tag = parse_tag(raw)
            .ok_or_else(|| Error::format(None, format!("unparseable BIO tag {raw:?} at word {i}")))?;
        let next = match tag {
            Tag::Outside => None,
            Tag::Begin(l) => Some((i, l)),
            Tag::Inside(l) => match open {
                Some((start, cur)) if cur == l => Some((start, l)),
                _ => Some((i, l)),
            },
        };
        if let Some((start, label)) = open {
            if next.is_none_or(|(s, _)| s != start) {
                spans.push(EntitySpan {
                    start,
                    end: i,
                    label: Some(label.to_owned()),
                });
            }
        }
        open = next;
    }
    if let Some((start, label)) = open {
        spans.push(EntitySpan {
            start,
            end: tags.len(),
            label: Some(label.to_owned()),
        });
    }
    Ok(spans)
}
