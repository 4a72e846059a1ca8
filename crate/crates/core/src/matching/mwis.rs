use crate::error::Result;

use super::{MatchingProblem, MatchingSolution};

/// Solves the problem without the per-source cap: each candidate is worth
/// its best cost over all sources, and the heaviest set of pairwise
/// disjoint candidates is found by the weighted-interval-scheduling DP.
///
/// A source may end up assigned to several candidates. The mode is ignored.
pub fn solve_relaxed_mwis(problem: &MatchingProblem) -> Result<MatchingSolution> {
    let scaled = problem.scaled()?;
    let spans = problem.candidate_spans();

    // (candidate, best source, weight) for candidates worth anything.
    let mut items: Vec<(usize, usize, u128)> = Vec::new();
    for t in 0..spans.len() {
        let mut best: Option<(usize, u128)> = None;
        for (s, row) in scaled.weights.iter().enumerate() {
            if row[t] > 0 && best.is_none_or(|(_, w)| row[t] > w) {
                best = Some((s, row[t]));
            }
        }
        if let Some((s, w)) = best {
            items.push((t, s, w));
        }
    }
    items.sort_by_key(|&(t, _, _)| (spans[t].end, spans[t].start, t));

    let ends: Vec<usize> = items.iter().map(|&(t, _, _)| spans[t].end).collect();
    // total[k]: best weight using the first k items.
    let mut total = vec![0u128; items.len() + 1];
    let mut take = vec![false; items.len()];
    let mut prev = vec![0usize; items.len()];
    for (k, &(t, _, w)) in items.iter().enumerate() {
        prev[k] = ends[..k].partition_point(|&e| e <= spans[t].start);
        let with = total[prev[k]] + w;
        if with > total[k] {
            total[k + 1] = with;
            take[k] = true;
        } else {
            total[k + 1] = total[k];
        }
    }

    let mut pairs = Vec::new();
    let mut k = items.len();
    while k > 0 {
        if take[k - 1] {
            let (t, s, _) = items[k - 1];
            pairs.push((s, t));
            k = prev[k - 1];
        } else {
            k -= 1;
        }
    }
    Ok(MatchingSolution::from_pairs(problem, pairs, true))
}
