use crate::error::{Error, Result};

use super::{MatchMode, MatchingProblem, MatchingSolution};

/// Maximum-weight assignment of rows to distinct columns (Hungarian method
/// with potentials, O(n^2 m)). Every row of the smaller side is matched;
/// callers treat zero-weight pairs as "unassigned".
fn max_weight_assignment(weights: &[Vec<i128>]) -> Vec<Option<usize>> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return vec![None; rows];
    }
    if rows > cols {
        let transposed: Vec<Vec<i128>> = (0..cols)
            .map(|j| (0..rows).map(|i| weights[i][j]).collect())
            .collect();
        let by_col = max_weight_assignment(&transposed);
        let mut out = vec![None; rows];
        for (j, i) in by_col.into_iter().enumerate() {
            if let Some(i) = i {
                out[i] = Some(j);
            }
        }
        return out;
    }

    const INF: i128 = i128::MAX / 4;
    let cost = |i: usize, j: usize| -weights[i - 1][j - 1];
    let (n, m) = (rows, cols);
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; m + 1];
    // owner[j]: row matched to column j (1-based, 0 = none)
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv = vec![INF; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = INF;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![None; n];
    for j in 1..=m {
        if owner[j] != 0 {
            out[owner[j] - 1] = Some(j - 1);
        }
    }
    out
}

/// Exact solver for disjoint candidates, where the problem is a plain
/// maximum-weight bipartite matching.
///
/// Under [`MatchMode::RequireAll`] every positive pair gets a bonus larger
/// than any attainable total, so the matching maximizes the number of
/// projected sources before the cost.
pub fn solve_assignment_exact(problem: &MatchingProblem) -> Result<MatchingSolution> {
    if let Some((a, b)) = problem.candidates().first_overlap() {
        return Err(Error::CandidatesNotDisjoint {
            first: a.bounds(),
            second: b.bounds(),
        });
    }
    let scaled = problem.scaled()?;
    let require_all = problem.mode() == MatchMode::RequireAll;
    let to_i128 = |w: u128| i128::try_from(w).map_err(|_| Error::Overflow);
    let bonus: i128 = if require_all {
        let mut total: i128 = 1;
        for row in &scaled.weights {
            let best = row.iter().copied().max().unwrap_or(0);
            total = total.checked_add(to_i128(best)?).ok_or(Error::Overflow)?;
        }
        total
    } else {
        0
    };
    let mut weights = Vec::with_capacity(scaled.weights.len());
    for row in &scaled.weights {
        let mut out = Vec::with_capacity(row.len());
        for &w in row {
            out.push(if w == 0 { 0 } else { to_i128(w)? + bonus });
        }
        weights.push(out);
    }
    let matched = max_weight_assignment(&weights);
    let pairs: Vec<(usize, usize)> = matched
        .iter()
        .enumerate()
        .filter_map(|(s, t)| t.filter(|&t| scaled.weights[s][t] > 0).map(|t| (s, t)))
        .collect();
    if require_all && pairs.len() < problem.num_sources() {
        let uncovered = (0..problem.num_sources())
            .filter(|s| !pairs.iter().any(|p| p.0 == *s))
            .collect();
        return Err(Error::Infeasible { uncovered });
    }
    Ok(MatchingSolution::from_pairs(problem, pairs, true))
}
