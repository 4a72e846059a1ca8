use std::fmt::Write;

use crate::model::EntitySpan;

use super::{MatchingProblem, MatchingSolution};

fn span_label(span: &EntitySpan) -> String {
    match &span.label {
        Some(l) => format!("({},{}) {}", span.start, span.end, l),
        None => format!("({},{})", span.start, span.end),
    }
}

/// Plain-text cost matrix: one row per source, one column per candidate,
/// costs printed as `a/b`.
pub fn render_matrix(problem: &MatchingProblem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "mode: {}", problem.mode());
    if problem.num_sources() == 0 || problem.num_candidates() == 0 {
        let _ = writeln!(
            out,
            "empty cost matrix ({} sources x {} candidates)",
            problem.num_sources(),
            problem.num_candidates()
        );
        return out;
    }
    let row_heads: Vec<String> = problem
        .sources()
        .iter()
        .enumerate()
        .map(|(i, s)| format!("s{i} {}", span_label(s)))
        .collect();
    let col_heads: Vec<String> = problem
        .candidate_spans()
        .iter()
        .enumerate()
        .map(|(j, t)| format!("t{j} {}", span_label(t)))
        .collect();
    let cells: Vec<Vec<String>> = problem
        .costs()
        .iter()
        .map(|row| row.iter().map(ToString::to_string).collect())
        .collect();
    let head_width = row_heads.iter().map(String::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..col_heads.len())
        .map(|j| {
            cells
                .iter()
                .map(|row| row[j].len())
                .chain([col_heads[j].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();

    let _ = write!(out, "{:head_width$}", "");
    for (h, w) in col_heads.iter().zip(&widths) {
        let _ = write!(out, "  {h:>w$}");
    }
    out.push('\n');
    for (head, row) in row_heads.iter().zip(&cells) {
        let _ = write!(out, "{head:head_width$}");
        for (c, w) in row.iter().zip(&widths) {
            let _ = write!(out, "  {c:>w$}");
        }
        out.push('\n');
    }
    out
}

/// Objective plus one line per assignment.
pub fn render_solution(name: &str, problem: &MatchingProblem, solution: &MatchingSolution) -> String {
    let mut out = format!(
        "{name}: objective {}{}\n",
        solution.objective,
        if solution.exact { " (exact)" } else { "" }
    );
    for &(s, t) in &solution.assignments {
        let _ = writeln!(
            out,
            "  s{s} {} -> t{t} {}  cost {}",
            span_label(&problem.sources()[s]),
            span_label(&problem.candidate_spans()[t]),
            problem.cost(s, t)
        );
    }
    out
}
