//! Exact-match span precision, recall and F1.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use num_traits::ToPrimitive;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::error::{Error, Result};
use crate::io::CorpusDocument;
use crate::model::Rational;

/// Match counts with the ratios derived from them. Every `0/0` is taken as 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Scores {
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
}

fn ratio(num: u64, den: u64) -> Rational {
    if den == 0 {
        Rational::from_integer(0)
    } else {
        Rational::new(num.into(), den.into())
    }
}

impl Scores {
    pub fn precision(&self) -> Rational {
        ratio(self.true_positives, self.true_positives + self.false_positives)
    }

    pub fn recall(&self) -> Rational {
        ratio(self.true_positives, self.true_positives + self.false_negatives)
    }

    /// Harmonic mean of precision and recall, i.e. `2tp / (2tp + fp + fn)`.
    pub fn f1(&self) -> Rational {
        let (p, r) = (self.precision(), self.recall());
        let sum = p + r;
        if sum == Rational::from_integer(0) {
            sum
        } else {
            Rational::from_integer(2) * p * r / sum
        }
    }

    fn add(&mut self, other: &Scores) {
        self.true_positives += other.true_positives;
        self.false_positives += other.false_positives;
        self.false_negatives += other.false_negatives;
    }
}

fn as_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(0.0)
}

impl Serialize for Scores {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(6))?;
        map.serialize_entry("true_positives", &self.true_positives)?;
        map.serialize_entry("false_positives", &self.false_positives)?;
        map.serialize_entry("false_negatives", &self.false_negatives)?;
        map.serialize_entry("precision", &as_f64(self.precision()))?;
        map.serialize_entry("recall", &as_f64(self.recall()))?;
        map.serialize_entry("f1", &as_f64(self.f1()))?;
        map.end()
    }
}

/// Micro-averaged scores plus a per-label breakdown.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalReport {
    pub micro: Scores,
    pub per_label: BTreeMap<String, Scores>,
}

impl Serialize for EvalReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let m = &self.micro;
        let mut map = serializer.serialize_map(Some(7))?;
        map.serialize_entry("true_positives", &m.true_positives)?;
        map.serialize_entry("false_positives", &m.false_positives)?;
        map.serialize_entry("false_negatives", &m.false_negatives)?;
        map.serialize_entry("precision", &as_f64(m.precision()))?;
        map.serialize_entry("recall", &as_f64(m.recall()))?;
        map.serialize_entry("f1", &as_f64(m.f1()))?;
        map.serialize_entry("per_label", &self.per_label)?;
        map.end()
    }
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Fixed-width table, one row per label and a closing micro row.
    pub fn render_text(&self) -> String {
        let mut rows: Vec<(&str, &Scores)> =
            self.per_label.iter().map(|(l, s)| (l.as_str(), s)).collect();
        rows.push(("micro", &self.micro));
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:width$}  {:>6}  {:>6}  {:>6}  {:>9}  {:>9}  {:>9}",
            "label", "tp", "fp", "fn", "precision", "recall", "f1"
        );
        for (label, s) in rows {
            let _ = writeln!(
                out,
                "{label:width$}  {:>6}  {:>6}  {:>6}  {:>9.4}  {:>9.4}  {:>9.4}",
                s.true_positives,
                s.false_positives,
                s.false_negatives,
                as_f64(s.precision()),
                as_f64(s.recall()),
                as_f64(s.f1())
            );
        }
        let m = &self.micro;
        let _ = writeln!(out, "P={} R={} F1={}", m.precision(), m.recall(), m.f1());
        out
    }
}

/// Scores `pred` against `gold`: a predicted span counts only if the gold
/// sentence holds the same `(start, end, label)`.
pub fn evaluate(pred: &CorpusDocument, gold: &CorpusDocument) -> Result<EvalReport> {
    if pred.len() != gold.len() {
        let first = pred.len().min(gold.len());
        return Err(Error::Mismatch(format!(
            "sentence counts differ ({} predicted, {} gold); first divergent sentence is {first}",
            pred.len(),
            gold.len()
        )));
    }
    let mut report = EvalReport::default();
    for (i, (p, g)) in pred.sentences.iter().zip(&gold.sentences).enumerate() {
        if p.sentence().tokens() != g.sentence().tokens() {
            return Err(Error::Mismatch(format!(
                "sentence {i}: predicted and gold tokens differ"
            )));
        }
        let gold_set: BTreeSet<_> = g.entities().iter().collect();
        let pred_set: BTreeSet<_> = p.entities().iter().collect();
        for e in &pred_set {
            let slot = report
                .per_label
                .entry(e.label.clone().unwrap_or_default())
                .or_default();
            if gold_set.contains(e) {
                slot.true_positives += 1;
            } else {
                slot.false_positives += 1;
            }
        }
        for e in gold_set.difference(&pred_set) {
            report
                .per_label
                .entry(e.label.clone().unwrap_or_default())
                .or_default()
                .false_negatives += 1;
        }
    }
    let mut micro = Scores::default();
    for s in report.per_label.values() {
        micro.add(s);
    }
    report.micro = micro;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EntitySpan, LabeledSentence, Sentence};

    type Rows<'a> = Vec<(usize, Vec<(usize, usize, &'a str)>)>;

    fn doc(sents: Rows) -> CorpusDocument {
        CorpusDocument::new(
            sents
                .into_iter()
                .enumerate()
                .map(|(id, (n, ents))| {
                    let s = Sentence::new(id, (0..n).map(|i| format!("w{i}"))).unwrap();
                    let e = ents
                        .into_iter()
                        .map(|(a, b, l)| EntitySpan::labeled(a, b, l).unwrap())
                        .collect();
                    LabeledSentence::new(s, e).unwrap()
                })
                .collect(),
        )
    }

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    #[test]
    fn identity_scores_one() {
        let g = doc(vec![
            (6, vec![(0, 1, "PER"), (2, 4, "LOC")]),
            (5, vec![(0, 2, "ORG"), (3, 4, "LOC"), (4, 5, "PER")]),
        ]);
        let r = evaluate(&g, &g).unwrap();
        assert_eq!(r.micro.true_positives, 5);
        assert_eq!(r.micro.f1(), Rational::from_integer(1));
    }

    #[test]
    fn empty_prediction() {
        let g = doc(vec![(6, vec![(0, 1, "PER"), (2, 4, "LOC")])]);
        let p = doc(vec![(6, vec![])]);
        let r = evaluate(&p, &g).unwrap();
        assert_eq!(
            (r.micro.true_positives, r.micro.false_positives, r.micro.false_negatives),
            (0, 0, 2)
        );
        let zero = Rational::from_integer(0);
        assert_eq!((r.micro.precision(), r.micro.recall(), r.micro.f1()), (zero, zero, zero));
    }

    #[test]
    fn boundary_shift_half() {
        let g = doc(vec![(7, vec![(0, 2, "PER"), (5, 6, "LOC")])]);
        let p = doc(vec![(7, vec![(0, 2, "PER"), (4, 6, "LOC")])]);
        let r = evaluate(&p, &g).unwrap();
        assert_eq!(
            (r.micro.true_positives, r.micro.false_positives, r.micro.false_negatives),
            (1, 1, 1)
        );
        assert_eq!((r.micro.precision(), r.micro.recall(), r.micro.f1()), (half(), half(), half()));
        assert_eq!(r.per_label["LOC"].false_positives, 1);
        assert_eq!(r.per_label["PER"].true_positives, 1);
        assert!(r.render_text().ends_with("P=1/2 R=1/2 F1=1/2\n"));
    }

    #[test]
    fn label_swap_is_miss() {
        let g = doc(vec![(3, vec![(0, 1, "PER")])]);
        let p = doc(vec![(3, vec![(0, 1, "ORG")])]);
        assert_eq!(evaluate(&p, &g).unwrap().micro.f1(), Rational::from_integer(0));
    }

    #[test]
    fn mismatches() {
        let g = doc(vec![(3, vec![]), (2, vec![])]);
        assert!(matches!(evaluate(&doc(vec![(3, vec![])]), &g), Err(Error::Mismatch(_))));
        let err = evaluate(&doc(vec![(3, vec![]), (3, vec![])]), &g).unwrap_err();
        assert!(err.to_string().contains("sentence 1"));
    }

    #[test]
    fn json_record() {
        let g = doc(vec![(7, vec![(0, 2, "PER"), (5, 6, "LOC")])]);
        let p = doc(vec![(7, vec![(0, 2, "PER"), (4, 6, "LOC")])]);
        let v: serde_json::Value = serde_json::from_str(&evaluate(&p, &g).unwrap().to_json()).unwrap();
        assert_eq!(v["f1"], 0.5);
        assert_eq!(v["true_positives"], 1);
        assert_eq!(v["per_label"]["PER"]["precision"], 1.0);
    }
}
