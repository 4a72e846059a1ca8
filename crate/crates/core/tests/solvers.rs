mod common;

use annoproj::matching::{
    solve_assignment_exact, solve_bruteforce, solve_greedy, solve_relaxed_mwis, MatchMode,
};
use annoproj::{Error, ErrorKind};
use common::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn brute_force_matches_subset_enumeration() {
    let mut rng = StdRng::seed_from_u64(11);
    for i in 0..600 {
        let mode = if i % 2 == 0 { MatchMode::AtMostOne } else { MatchMode::RequireAll };
        let p = random_problem(&mut rng, 3, 5, false, mode);
        if p.num_sources() * p.num_candidates() > 16 {
            continue;
        }
        match (solve_bruteforce(&p), subset_optimum(&p)) {
            (Ok(sol), Some(best)) => {
                check_feasible(&p, &sol, true).unwrap();
                assert_eq!(sol.objective, best, "instance {i}");
            }
            (Err(Error::Infeasible { uncovered }), None) => {
                assert_eq!(mode, MatchMode::RequireAll);
                assert!(!uncovered.is_empty());
            }
            (got, want) => panic!("instance {i}: brute {got:?}, oracle {want:?}"),
        }
    }
}

#[test]
fn assignment_matches_subset_enumeration() {
    let mut rng = StdRng::seed_from_u64(12);
    for i in 0..600 {
        let mode = if i % 2 == 0 { MatchMode::AtMostOne } else { MatchMode::RequireAll };
        let p = random_problem(&mut rng, 4, 4, true, mode);
        if p.num_sources() * p.num_candidates() > 16 {
            continue;
        }
        match (solve_assignment_exact(&p), subset_optimum(&p)) {
            (Ok(sol), Some(best)) => {
                check_feasible(&p, &sol, true).unwrap();
                assert_eq!(sol.objective, best, "instance {i}");
            }
            (Err(Error::Infeasible { .. }), None) => {}
            (got, want) => panic!("instance {i}: assignment {got:?}, oracle {want:?}"),
        }
    }
}

#[test]
fn greedy_is_feasible_and_dominated() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..400 {
        let p = random_problem(&mut rng, 3, 5, false, MatchMode::AtMostOne);
        let g = solve_greedy(&p).unwrap();
        check_feasible(&p, &g, true).unwrap();
        assert!(!g.exact);
        if p.num_sources() * p.num_candidates() <= 16 {
            assert!(g.objective <= subset_optimum(&p).unwrap());
        }
    }
}

#[test]
fn greedy_refuses_require_all() {
    let mut rng = StdRng::seed_from_u64(14);
    let p = random_problem(&mut rng, 3, 5, false, MatchMode::RequireAll);
    let err = solve_greedy(&p).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Usage);
}

#[test]
fn assignment_rejects_overlapping_candidates() {
    let (src, _, align, _) = greedy_trap_pair();
    let tgt = words(0, 10);
    let set = annoproj::candidates::ngram_candidates(&tgt, Some(2)).unwrap();
    let p = annoproj::matching::build_problem(&src, set, &align, MatchMode::AtMostOne).unwrap();
    assert!(matches!(
        solve_assignment_exact(&p),
        Err(Error::CandidatesNotDisjoint { .. })
    ));
}

#[test]
fn relaxed_bound_holds() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..400 {
        let p = random_problem(&mut rng, 3, 10, false, MatchMode::AtMostOne);
        let m = solve_relaxed_mwis(&p).unwrap();
        check_feasible(&p, &m, false).unwrap();
        assert_eq!(m.objective, relaxed_optimum(&p));
        if let Ok(b) = solve_bruteforce(&p) {
            assert!(m.objective >= b.objective);
        }
    }
}

#[test]
fn solvers_are_deterministic() {
    let mut rng = StdRng::seed_from_u64(16);
    for _ in 0..100 {
        let p = random_problem(&mut rng, 4, 8, true, MatchMode::AtMostOne);
        assert_eq!(solve_greedy(&p).unwrap(), solve_greedy(&p).unwrap());
        assert_eq!(solve_bruteforce(&p).unwrap(), solve_bruteforce(&p).unwrap());
        assert_eq!(solve_assignment_exact(&p).unwrap(), solve_assignment_exact(&p).unwrap());
        assert_eq!(solve_relaxed_mwis(&p).unwrap(), solve_relaxed_mwis(&p).unwrap());
    }
}
