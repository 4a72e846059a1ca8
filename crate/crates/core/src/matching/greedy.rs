use std::cmp::Ordering;

use crate::error::{Error, Result};

use super::{MatchMode, MatchingProblem, MatchingSolution};

/// Repeatedly projects the remaining pair with the largest positive cost,
/// then drops that source and every candidate overlapping the chosen one.
///
/// Ties go to the lower source start, then the lower candidate start.
pub fn solve_greedy(problem: &MatchingProblem) -> Result<MatchingSolution> {
    if problem.mode() == MatchMode::RequireAll {
        return Err(Error::GreedyRequireAll);
    }
    let sources = problem.sources();
    let cands = problem.candidate_spans();
    let mut source_open = vec![true; sources.len()];
    let mut cand_open = vec![true; cands.len()];
    let mut picked = Vec::new();

    loop {
        let mut best: Option<(usize, usize)> = None;
        for (s, _) in source_open.iter().enumerate().filter(|(_, o)| **o) {
            for (t, _) in cand_open.iter().enumerate().filter(|(_, o)| **o) {
                let c = problem.cost(s, t);
                if *c.numer() == 0 {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bs, bt)) => match c.cmp(&problem.cost(bs, bt)) {
                        Ordering::Greater => true,
                        Ordering::Less => false,
                        Ordering::Equal => {
                            (sources[s].start, cands[t].start, s, t)
                                < (sources[bs].start, cands[bt].start, bs, bt)
                        }
                    },
                };
                if better {
                    best = Some((s, t));
                }
            }
        }
        let Some((s, t)) = best else { break };
        picked.push((s, t));
        source_open[s] = false;
        for (u, open) in cand_open.iter_mut().enumerate() {
            if cands[u].overlaps(&cands[t]) {
                *open = false;
            }
        }
    }
    Ok(MatchingSolution::from_pairs(problem, picked, false))
}
