use crate::error::{Error, Result};

use super::{MatchMode, MatchingProblem, MatchingSolution};

pub const MAX_BRUTE_SOURCES: usize = 6;
pub const MAX_BRUTE_CANDIDATES: usize = 12;

/// Exact solver by exhaustive search, refusing problems above the size guard.
pub fn solve_bruteforce(problem: &MatchingProblem) -> Result<MatchingSolution> {
    if problem.num_sources() > MAX_BRUTE_SOURCES || problem.num_candidates() > MAX_BRUTE_CANDIDATES
    {
        return Err(Error::GuardExceeded {
            sources: problem.num_sources(),
            candidates: problem.num_candidates(),
            max_sources: MAX_BRUTE_SOURCES,
            max_candidates: MAX_BRUTE_CANDIDATES,
        });
    }
    solve_bruteforce_unchecked(problem)
}

struct Search<'a> {
    weights: &'a [Vec<u128>],
    conflicts: Vec<Vec<usize>>,
    require_all: bool,
    blocked: Vec<u32>,
    current: Vec<Option<usize>>,
    best_key: Option<(usize, u128)>,
    best: Vec<Option<usize>>,
}

impl Search<'_> {
    /// Sources are decided in order; each tries its candidates in index
    /// order and then "unassigned". Only strict improvements replace the
    /// incumbent, so the first optimum in that order wins ties.
    fn run(&mut self, s: usize, count: usize, weight: u128) {
        if s == self.weights.len() {
            let key = (if self.require_all { count } else { 0 }, weight);
            if self.best_key.is_none_or(|b| key > b) {
                self.best_key = Some(key);
                self.best.clone_from(&self.current);
            }
            return;
        }
        for t in 0..self.weights[s].len() {
            let w = self.weights[s][t];
            if w == 0 || self.blocked[t] > 0 {
                continue;
            }
            for &u in &self.conflicts[t] {
                self.blocked[u] += 1;
            }
            self.current[s] = Some(t);
            self.run(s + 1, count + 1, weight + w);
            self.current[s] = None;
            for &u in &self.conflicts[t] {
                self.blocked[u] -= 1;
            }
        }
        self.run(s + 1, count, weight);
    }
}

/// Exhaustive search with no size guard.
///
/// Under [`MatchMode::RequireAll`] the search maximizes the number of
/// projected sources first; if that falls short, the sources left out of the
/// best partial assignment are reported.
pub fn solve_bruteforce_unchecked(problem: &MatchingProblem) -> Result<MatchingSolution> {
    let scaled = problem.scaled()?;
    let n = problem.num_sources();
    let mut search = Search {
        weights: &scaled.weights,
        conflicts: problem.conflicts(),
        require_all: problem.mode() == MatchMode::RequireAll,
        blocked: vec![0; problem.num_candidates()],
        current: vec![None; n],
        best_key: None,
        best: vec![None; n],
    };
    search.run(0, 0, 0);
    if search.require_all {
        let uncovered: Vec<usize> = (0..n).filter(|&s| search.best[s].is_none()).collect();
        if !uncovered.is_empty() {
            return Err(Error::Infeasible { uncovered });
        }
    }
    let pairs = search
        .best
        .iter()
        .enumerate()
        .filter_map(|(s, t)| t.map(|t| (s, t)))
        .collect();
    Ok(MatchingSolution::from_pairs(problem, pairs, true))
}
