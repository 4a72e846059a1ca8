//! Independent oracles and random instance generators shared by the
//! integration tests. Nothing here calls into the solvers it checks.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use annoproj::candidates::{CandidateSet, CandidateSource};
use annoproj::io::CorpusDocument;
use annoproj::matching::{build_problem, MatchMode, MatchingProblem, MatchingSolution};
use annoproj::{AlignmentSet, EntitySpan, LabeledSentence, Rational, Sentence};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn r(n: u128, d: u128) -> Rational {
    Rational::new(n, d)
}

pub fn zero() -> Rational {
    Rational::from_integer(0)
}

pub fn fixture_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn words(id: usize, n: usize) -> Sentence {
    Sentence::new(id, (0..n).map(|i| format!("w{i}"))).unwrap()
}

/// Feasibility check written against the constraint list directly.
/// `per_source_cap` is false for the relaxed problem.
pub fn check_feasible(
    p: &MatchingProblem,
    sol: &MatchingSolution,
    per_source_cap: bool,
) -> Result<(), String> {
    let cands = p.candidate_spans();
    let mut total = zero();
    for (k, &(s, t)) in sol.assignments.iter().enumerate() {
        if s >= p.num_sources() || t >= p.num_candidates() {
            return Err(format!("pair ({s}, {t}) out of range"));
        }
        if p.cost(s, t) == zero() {
            return Err(format!("zero-cost pair ({s}, {t}) assigned"));
        }
        total += p.cost(s, t);
        for &(s2, t2) in &sol.assignments[k + 1..] {
            let (a, b) = (&cands[t], &cands[t2]);
            if a.start < b.end && b.start < a.end {
                return Err(format!("candidates {t} and {t2} overlap"));
            }
            if per_source_cap && s == s2 {
                return Err(format!("source {s} assigned twice"));
            }
        }
    }
    if per_source_cap && p.mode() == MatchMode::RequireAll {
        let covered: BTreeSet<usize> = sol.assignments.iter().map(|a| a.0).collect();
        if covered.len() != p.num_sources() {
            return Err("require-all solution leaves a source unassigned".into());
        }
    }
    if total != sol.objective {
        return Err(format!("objective {} but pairs sum to {total}", sol.objective));
    }
    Ok(())
}

/// Exact optimum by enumerating every subset of the |S|x|T| decision
/// variables and filtering by the constraints. Returns `None` when no
/// subset is feasible.
pub fn subset_optimum(p: &MatchingProblem) -> Option<Rational> {
    let cells: Vec<(usize, usize)> = (0..p.num_sources())
        .flat_map(|s| (0..p.num_candidates()).map(move |t| (s, t)))
        .collect();
    assert!(cells.len() <= 20, "subset oracle limited to 20 variables");
    let cands = p.candidate_spans();
    let mut best: Option<Rational> = None;
    'subsets: for mask in 0u32..(1u32 << cells.len()) {
        let chosen: Vec<(usize, usize)> = (0..cells.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| cells[i])
            .collect();
        let mut per_source = vec![0; p.num_sources()];
        for (k, &(s, t)) in chosen.iter().enumerate() {
            if p.cost(s, t) == zero() {
                continue 'subsets;
            }
            per_source[s] += 1;
            for &(_, t2) in &chosen[k + 1..] {
                let (a, b) = (&cands[t], &cands[t2]);
                if a.start < b.end && b.start < a.end {
                    continue 'subsets;
                }
            }
        }
        let ok = match p.mode() {
            MatchMode::AtMostOne => per_source.iter().all(|&c| c <= 1),
            MatchMode::RequireAll => per_source.iter().all(|&c| c == 1),
        };
        if !ok {
            continue;
        }
        let value = chosen
            .iter()
            .fold(zero(), |acc, &(s, t)| acc + p.cost(s, t));
        if best.is_none_or(|b| value > b) {
            best = Some(value);
        }
    }
    best
}

/// Relaxed optimum: the heaviest set of pairwise disjoint candidates, each
/// worth its best cost, found by recursive enumeration of independent sets.
pub fn relaxed_optimum(p: &MatchingProblem) -> Rational {
    let cands = p.candidate_spans();
    let weight: Vec<Rational> = (0..p.num_candidates())
        .map(|t| {
            (0..p.num_sources())
                .map(|s| p.cost(s, t))
                .max()
                .unwrap_or_else(zero)
        })
        .collect();
    fn go(
        k: usize,
        chosen: &mut Vec<usize>,
        cands: &[EntitySpan],
        weight: &[Rational],
        best: &mut Rational,
    ) {
        if k == cands.len() {
            let v = chosen.iter().fold(Rational::from_integer(0), |a, &t| a + weight[t]);
            if v > *best {
                *best = v;
            }
            return;
        }
        go(k + 1, chosen, cands, weight, best);
        if chosen
            .iter()
            .all(|&t| !(cands[t].start < cands[k].end && cands[k].start < cands[t].end))
        {
            chosen.push(k);
            go(k + 1, chosen, cands, weight, best);
            chosen.pop();
        }
    }
    let mut best = zero();
    go(0, &mut Vec::new(), cands, &weight, &mut best);
    best
}

/// Random partial one-to-one alignment between sentences of the given
/// lengths.
pub fn random_one_to_one(rng: &mut StdRng, src_len: usize, tgt_len: usize) -> AlignmentSet {
    let mut targets: Vec<usize> = (0..tgt_len).collect();
    targets.shuffle(rng);
    let density: f64 = rng.gen_range(0.3..1.0);
    (0..src_len)
        .zip(targets)
        .filter(|_| rng.gen_bool(density))
        .collect()
}

/// Random flat labeled spans covering part of a sentence of length `n`.
pub fn random_flat_spans(rng: &mut StdRng, n: usize, max_spans: usize) -> Vec<EntitySpan> {
    let labels = ["PER", "LOC", "ORG", "MISC"];
    let mut spans = Vec::new();
    let mut pos = rng.gen_range(0..=1usize);
    while spans.len() < max_spans && pos < n {
        let len = rng.gen_range(1..=3usize.min(n - pos));
        spans.push(EntitySpan::labeled(pos, pos + len, *labels.choose(rng).unwrap()).unwrap());
        pos += len + rng.gen_range(0..=2usize);
    }
    spans
}

/// Random candidate intervals inside `0..n`: distinct, possibly overlapping
/// unless `disjoint`.
pub fn random_candidates(rng: &mut StdRng, n: usize, count: usize, disjoint: bool) -> Vec<EntitySpan> {
    let mut set: BTreeSet<(usize, usize)> = BTreeSet::new();
    if disjoint {
        let mut pos = rng.gen_range(0..=1usize);
        while set.len() < count && pos < n {
            let len = rng.gen_range(1..=3usize.min(n - pos));
            set.insert((pos, pos + len));
            pos += len + rng.gen_range(0..=1usize);
        }
    } else {
        for _ in 0..count * 4 {
            if set.len() == count {
                break;
            }
            let start = rng.gen_range(0..n);
            let len = rng.gen_range(1..=4usize.min(n - start));
            set.insert((start, start + len));
        }
    }
    set.into_iter()
        .map(|(s, e)| EntitySpan::candidate(s, e).unwrap())
        .collect()
}

/// A matching problem with real alignment-derived costs.
pub fn random_problem(
    rng: &mut StdRng,
    max_sources: usize,
    max_candidates: usize,
    disjoint: bool,
    mode: MatchMode,
) -> MatchingProblem {
    let src_len = rng.gen_range(2..=10usize);
    let tgt_len = rng.gen_range(2..=12usize);
    let max_spans = rng.gen_range(0..=max_sources);
    let sources = random_flat_spans(rng, src_len, max_spans);
    let labeled = LabeledSentence::new(words(0, src_len), sources).unwrap();
    let count = rng.gen_range(0..=max_candidates);
    let spans = random_candidates(rng, tgt_len, count, disjoint);
    let align = random_one_to_one(rng, src_len, tgt_len);
    let set = CandidateSet {
        sentence_id: 0,
        sentence_len: tgt_len,
        spans,
        source: if disjoint {
            CandidateSource::ExternalNer
        } else {
            CandidateSource::Ngram
        },
    };
    build_problem(&labeled, set, &align, mode).unwrap()
}

/// Unit-cost character edit distance, Wagner-Fischer table.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut table = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in table.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in table[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = table[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            table[i][j] = sub.min(table[i - 1][j] + 1).min(table[i][j - 1] + 1);
        }
    }
    table[a.len()][b.len()]
}

/// Corpus-level (tp, fp, fn) by set intersection of
/// `(sentence, start, end, label)` tuples.
pub fn set_counts(pred: &CorpusDocument, gold: &CorpusDocument) -> (u64, u64, u64) {
    let tuples = |d: &CorpusDocument| -> BTreeSet<(usize, usize, usize, String)> {
        d.sentences
            .iter()
            .enumerate()
            .flat_map(|(i, s)| {
                s.entities()
                    .iter()
                    .map(move |e| (i, e.start, e.end, e.label.clone().unwrap()))
            })
            .collect()
    };
    let (p, g) = (tuples(pred), tuples(gold));
    let tp = p.intersection(&g).count() as u64;
    (tp, p.len() as u64 - tp, g.len() as u64 - tp)
}

/// Random corpus with token text drawn from a mixed-script alphabet.
pub fn random_document(rng: &mut StdRng, max_sentences: usize) -> CorpusDocument {
    let alphabet: Vec<char> = "abcXYZéüßЖж中-.,'0".chars().collect();
    let n = rng.gen_range(0..=max_sentences);
    CorpusDocument::new(
        (0..n)
            .map(|id| {
                let len = rng.gen_range(1..=9usize);
                let tokens: Vec<String> = (0..len)
                    .map(|_| {
                        (0..rng.gen_range(1..=5usize))
                            .map(|_| *alphabet.choose(rng).unwrap())
                            .collect()
                    })
                    .collect();
                let spans = random_flat_spans(rng, len, 4);
                LabeledSentence::new(Sentence::new(id, tokens).unwrap(), spans).unwrap()
            })
            .collect(),
    )
}

/// Two five-word entities on each side with many-to-many links chosen so the
/// costs are `[[3/5, 1/2], [1/2, 1/10]]`: greedy reaches 7/10, the optimum 1.
pub fn greedy_trap_pair() -> (LabeledSentence, Sentence, AlignmentSet, Vec<EntitySpan>) {
    let src = LabeledSentence::new(
        words(0, 10),
        vec![
            EntitySpan::labeled(0, 5, "ORG").unwrap(),
            EntitySpan::labeled(5, 10, "LOC").unwrap(),
        ],
    )
    .unwrap();
    let tgt = words(0, 10);
    let mut align = AlignmentSet::new();
    for (s_off, t_off, links) in [(0, 0, 6), (0, 5, 5), (5, 0, 5), (5, 5, 1)] {
        for k in 0..links {
            align.insert(s_off + k / 5, t_off + k % 5);
        }
    }
    let cands = vec![
        EntitySpan::candidate(0, 5).unwrap(),
        EntitySpan::candidate(5, 10).unwrap(),
    ];
    (src, tgt, align, cands)
}

/// Runs the compiled binary and returns (status, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_annoproj"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

/// The exact micro F1 from the closing `P=.. R=.. F1=..` line of a text
/// report.
pub fn report_f1(text: &str) -> Rational {
    let last = text.lines().last().expect("report has lines");
    let f1 = last
        .split_whitespace()
        .find_map(|w| w.strip_prefix("F1="))
        .expect("F1 field");
    f1.parse().expect("rational F1")
}
