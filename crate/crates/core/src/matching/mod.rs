//! The entity-candidate matching problem and its solvers.
//!
//! Each source entity may be projected onto one target candidate; projected
//! candidates must not overlap. The objective is the total matching cost of
//! the chosen pairs. Costs are exact rationals, and the exact solvers work on
//! integers scaled by the least common denominator, so every comparison is
//! exact and solutions are reproducible bit for bit.

mod assignment;
mod brute;
mod greedy;
mod mwis;
mod render;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::candidates::CandidateSet;
use crate::error::{Error, Result};
use crate::model::{AlignmentSet, EntitySpan, LabeledSentence, Rational};

pub use assignment::solve_assignment_exact;
pub use brute::{solve_bruteforce, solve_bruteforce_unchecked, MAX_BRUTE_CANDIDATES, MAX_BRUTE_SOURCES};
pub use greedy::solve_greedy;
pub use mwis::solve_relaxed_mwis;
pub use render::{render_matrix, render_solution};

/// Per-source constraint of the matching problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MatchMode {
    /// Each source is projected at most once.
    #[default]
    AtMostOne,
    /// Each source must be projected exactly once.
    RequireAll,
}

impl FromStr for MatchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "atmost" => Ok(MatchMode::AtMostOne),
            "all" => Ok(MatchMode::RequireAll),
            _ => Err(Error::Config(format!("unknown mode {s:?} (expected atmost|all)"))),
        }
    }
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchMode::AtMostOne => "atmost",
            MatchMode::RequireAll => "all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Solver {
    #[default]
    Greedy,
    BruteForce,
    Assignment,
    RelaxedMwis,
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Solver::Greedy),
            "brute" => Ok(Solver::BruteForce),
            "assignment" => Ok(Solver::Assignment),
            "mwis" => Ok(Solver::RelaxedMwis),
            _ => Err(Error::Config(format!(
                "unknown solver {s:?} (expected greedy|brute|assignment|mwis)"
            ))),
        }
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Greedy => "greedy",
            Solver::BruteForce => "brute",
            Solver::Assignment => "assignment",
            Solver::RelaxedMwis => "mwis",
        })
    }
}

/// `a / (len(src) + len(tgt))` where `a` counts alignment links from a word
/// of `src` to a word of `tgt`.
pub fn matching_cost(src: &EntitySpan, tgt: &EntitySpan, align: &AlignmentSet) -> Rational {
    let aligned = align.count_between(src, tgt) as u128;
    Rational::new(aligned, (src.len() + tgt.len()) as u128)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingProblem {
    sources: Vec<EntitySpan>,
    candidates: CandidateSet,
    costs: Vec<Vec<Rational>>,
    mode: MatchMode,
}

impl MatchingProblem {
    /// `costs[s][t]` is the cost of projecting source `s` onto candidate `t`.
    pub fn new(
        sources: Vec<EntitySpan>,
        candidates: CandidateSet,
        costs: Vec<Vec<Rational>>,
        mode: MatchMode,
    ) -> Result<Self> {
        if costs.len() != sources.len()
            || costs.iter().any(|row| row.len() != candidates.len())
        {
            return Err(Error::Mismatch(format!(
                "cost matrix must be {} x {}",
                sources.len(),
                candidates.len()
            )));
        }
        Ok(MatchingProblem {
            sources,
            candidates,
            costs,
            mode,
        })
    }

    pub fn sources(&self) -> &[EntitySpan] {
        &self.sources
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn candidate_spans(&self) -> &[EntitySpan] {
        &self.candidates.spans
    }

    pub fn costs(&self) -> &[Vec<Rational>] {
        &self.costs
    }

    pub fn cost(&self, source: usize, candidate: usize) -> Rational {
        self.costs[source][candidate]
    }

    pub fn mode(&self) -> MatchMode {
        self.mode
    }

    pub fn with_mode(mut self, mode: MatchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn num_sources(&self) -> usize {
        self.sources.len()
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    /// Costs multiplied by the least common denominator of the non-zero
    /// entries.
    pub(crate) fn scaled(&self) -> Result<ScaledCosts> {
        // Keeps sums of up to 2^31 weights inside u128.
        const LIMIT: u128 = 1 << 96;
        let mut scale: u128 = 1;
        for c in self.costs.iter().flatten() {
            if *c.numer() != 0 {
                scale = scale.lcm(c.denom());
                if scale > LIMIT {
                    return Err(Error::Overflow);
                }
            }
        }
        let weights = self
            .costs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.numer() * (scale / c.denom()))
                    .collect()
            })
            .collect();
        Ok(ScaledCosts { weights })
    }

    /// `conflicts[t]` lists every candidate sharing a word with `t`, `t`
    /// included.
    pub(crate) fn conflicts(&self) -> Vec<Vec<usize>> {
        let spans = self.candidate_spans();
        spans
            .iter()
            .map(|a| {
                spans
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| a.overlaps(b))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect()
    }
}

pub(crate) struct ScaledCosts {
    pub weights: Vec<Vec<u128>>,
}

/// Chosen `(source, candidate)` pairs, sorted, with their total cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingSolution {
    pub assignments: Vec<(usize, usize)>,
    pub objective: Rational,
    pub exact: bool,
}

impl MatchingSolution {
    pub(crate) fn from_pairs(
        problem: &MatchingProblem,
        mut assignments: Vec<(usize, usize)>,
        exact: bool,
    ) -> Self {
        assignments.sort_unstable();
        let objective = assignments
            .iter()
            .map(|&(s, t)| problem.cost(s, t))
            .fold(Rational::from_integer(0), |acc, c| acc + c);
        MatchingSolution {
            assignments,
            objective,
            exact,
        }
    }

    pub fn empty(exact: bool) -> Self {
        MatchingSolution {
            assignments: Vec::new(),
            objective: Rational::from_integer(0),
            exact,
        }
    }
}

/// Builds the problem for one sentence pair; sources keep their order and
/// labels.
pub fn build_problem(
    labeled: &LabeledSentence,
    candidates: CandidateSet,
    align: &AlignmentSet,
    mode: MatchMode,
) -> Result<MatchingProblem> {
    align.check_bounds(labeled.sentence().len(), candidates.sentence_len)?;
    let sources = labeled.entities().to_vec();
    let costs = sources
        .iter()
        .map(|s| {
            candidates
                .spans
                .iter()
                .map(|t| matching_cost(s, t, align))
                .collect()
        })
        .collect();
    MatchingProblem::new(sources, candidates, costs, mode)
}

pub fn solve(problem: &MatchingProblem, solver: Solver) -> Result<MatchingSolution> {
    match solver {
        Solver::Greedy => solve_greedy(problem),
        Solver::BruteForce => solve_bruteforce(problem),
        Solver::Assignment => solve_assignment_exact(problem),
        Solver::RelaxedMwis => solve_relaxed_mwis(problem),
    }
}
