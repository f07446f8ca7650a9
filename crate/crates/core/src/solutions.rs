//! Core membership checks, the starting core imputation, and the two lattice
//! extremes (U-optimal / V-optimal).
//!
//! Core membership needs no subset enumeration: an imputation is in the core
//! exactly when it is a feasible dual (no under-tight edge, nothing negative)
//! whose total equals the worth of the game.

use crate::game::{AssignmentGame, Imputation, Vertex};
use crate::matching::{max_weight_matching, total_worth, worth, WorthQuery};
use crate::rational::Rational;
use serde::Serialize;
use thiserror::Error;

/// A violated dual constraint `u_i + v_j >= w_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolatedEdge {
    pub u: usize,
    pub v: usize,
    pub required: Rational,
    pub actual: Rational,
}

/// Outcome of a core-membership check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreCheckReport {
    pub is_core: bool,
    pub violated_edges: Vec<ViolatedEdge>,
    pub negative_vertices: Vec<String>,
    /// worth minus total allocated profit
    pub total_gap: Rational,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolutionError {
    #[error("imputation has {got_u}+{got_v} entries, instance needs {want_u}+{want_v}")]
    DimensionMismatch {
        got_u: usize,
        got_v: usize,
        want_u: usize,
        want_v: usize,
    },
    #[error("lattice operands must be core imputations")]
    NotInCore,
}

/// Checks dual feasibility and optimality of `imputation` for `game`.
pub fn check_core(
    game: &AssignmentGame,
    imputation: &Imputation,
) -> Result<CoreCheckReport, SolutionError> {
    if !imputation.matches_dimensions(game) {
        return Err(SolutionError::DimensionMismatch {
            got_u: imputation.u.len(),
            got_v: imputation.v.len(),
            want_u: game.left_size(),
            want_v: game.right_size(),
        });
    }
    let mut violated_edges = Vec::new();
    for e in game.edges() {
        let got = &imputation.u[e.u] + &imputation.v[e.v];
        if got < e.weight {
            violated_edges.push(ViolatedEdge {
                u: e.u,
                v: e.v,
                required: e.weight.clone(),
                actual: got,
            });
        }
    }
    let mut negative_vertices = Vec::new();
    for (i, x) in imputation.u.iter().enumerate() {
        if x.is_negative() {
            negative_vertices.push(Vertex::u(i).to_string());
        }
    }
    for (j, x) in imputation.v.iter().enumerate() {
        if x.is_negative() {
            negative_vertices.push(Vertex::v(j).to_string());
        }
    }
    let total_gap = &total_worth(game) - &imputation.total();
    let is_core = violated_edges.is_empty() && negative_vertices.is_empty() && total_gap.is_zero();
    Ok(CoreCheckReport {
        is_core,
        violated_edges,
        negative_vertices,
        total_gap,
    })
}

pub fn is_core(game: &AssignmentGame, imputation: &Imputation) -> bool {
    check_core(game, imputation)
        .map(|r| r.is_core)
        .unwrap_or(false)
}

/// The matching engine's optimal dual, used as the starting point of a run.
pub fn initial_core_imputation(game: &AssignmentGame) -> Imputation {
    let (_, dual) = max_weight_matching(game);
    debug_assert!(is_core(game, &dual));
    dual
}

/// The two lattice extremes. Each coordinate of the favored side takes its
/// marginal contribution (worth lost when the vertex leaves), partners on a
/// fixed maximum matching are filled in by tightness and everyone else gets
/// zero. Cross-checked against grid maximization in the test-suite.
pub fn extreme_imputations(game: &AssignmentGame) -> (Imputation, Imputation) {
    let (matching, _) = max_weight_matching(game);
    let w_max = &matching.weight;

    let mut u_opt = Imputation::zeros(game.left_size(), game.right_size());
    for i in 0..game.left_size() {
        u_opt.u[i] = w_max - &worth(game, &WorthQuery::without_vertex(Vertex::u(i)));
    }
    for &(i, j) in &matching.pairs {
        let w = &game.edges()[game.edge_index(i, j).unwrap()].weight;
        u_opt.v[j] = w - &u_opt.u[i];
    }

    let mut v_opt = Imputation::zeros(game.left_size(), game.right_size());
    for j in 0..game.right_size() {
        v_opt.v[j] = w_max - &worth(game, &WorthQuery::without_vertex(Vertex::v(j)));
    }
    for &(i, j) in &matching.pairs {
        let w = &game.edges()[game.edge_index(i, j).unwrap()].weight;
        v_opt.u[i] = w - &v_opt.v[j];
    }

    debug_assert!(is_core(game, &u_opt));
    debug_assert!(is_core(game, &v_opt));
    (u_opt, v_opt)
}

fn lattice_combine(
    game: &AssignmentGame,
    a: &Imputation,
    b: &Imputation,
    pick_max: bool,
) -> Result<Imputation, SolutionError> {
    if !is_core(game, a) || !is_core(game, b) {
        return Err(SolutionError::NotInCore);
    }
    let (matching, _) = max_weight_matching(game);
    let mut out = Imputation::zeros(game.left_size(), game.right_size());
    for i in 0..game.left_size() {
        let (x, y) = (a.u[i].clone(), b.u[i].clone());
        out.u[i] = if pick_max { x.max(y) } else { x.min(y) };
    }
    for &(i, j) in &matching.pairs {
        let w = &game.edges()[game.edge_index(i, j).unwrap()].weight;
        out.v[j] = w - &out.u[i];
    }
    debug_assert!(is_core(game, &out));
    Ok(out)
}

/// Meet takes the larger `u_i` per coordinate (the U-favoring direction);
/// the V side follows from tightness on a fixed maximum matching.
pub fn lattice_meet(
    game: &AssignmentGame,
    a: &Imputation,
    b: &Imputation,
) -> Result<Imputation, SolutionError> {
    lattice_combine(game, a, b, true)
}

/// Join takes the smaller `u_i` per coordinate.
pub fn lattice_join(
    game: &AssignmentGame,
    a: &Imputation,
    b: &Imputation,
) -> Result<Imputation, SolutionError> {
    lattice_combine(game, a, b, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn imp(u: &[i64], v: &[i64]) -> Imputation {
        Imputation {
            u: u.iter().map(|&x| Rational::from_int(x)).collect(),
            v: v.iter().map(|&x| Rational::from_int(x)).collect(),
        }
    }

    #[test]
    fn worked_example_start_is_core() {
        let g = fixtures::ex2();
        let report = check_core(&g, &imp(&[60, 10], &[40, 50, 0])).unwrap();
        assert!(report.is_core);
        let report = check_core(&g, &imp(&[70, 30], &[30, 30, 0])).unwrap();
        assert!(report.is_core);
    }

    #[test]
    fn under_tight_edge_detected() {
        let g = fixtures::ex2();
        let report = check_core(&g, &imp(&[50, 10], &[50, 50, 0])).unwrap();
        assert!(!report.is_core);
        assert_eq!(report.violated_edges.len(), 1);
        let bad = &report.violated_edges[0];
        assert_eq!((bad.u, bad.v), (0, 2));
        assert_eq!(bad.required, Rational::from_int(60));
        assert_eq!(bad.actual, Rational::from_int(50));
        assert!(report.total_gap.is_zero());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let g = fixtures::ex2();
        assert!(check_core(&g, &imp(&[1], &[2])).is_err());
    }

    #[test]
    fn initial_imputation_contract() {
        for g in [
            fixtures::ex_k11(),
            fixtures::ex_sub(),
            fixtures::ex_vu(),
            fixtures::ex_vb(),
            fixtures::ex2(),
        ] {
            let start = initial_core_imputation(&g);
            assert!(check_core(&g, &start).unwrap().is_core);
        }
    }

    #[test]
    fn unique_core_points_forced() {
        let g = fixtures::ex_vb();
        assert_eq!(initial_core_imputation(&g), imp(&[60, 0], &[0, 40]));
        let g = fixtures::ex_vu();
        assert_eq!(initial_core_imputation(&g), imp(&[100], &[0, 0]));
    }

    #[test]
    fn extremes_on_fixtures() {
        let g = fixtures::ex_k11();
        let (u_opt, v_opt) = extreme_imputations(&g);
        assert_eq!(u_opt, imp(&[10], &[0]));
        assert_eq!(v_opt, imp(&[0], &[10]));

        let g = fixtures::ex2();
        let (u_opt, v_opt) = extreme_imputations(&g);
        assert_eq!(u_opt, imp(&[100, 60], &[0, 0, 0]));
        assert_eq!(v_opt, imp(&[60, 0], &[40, 60, 0]));
    }

    #[test]
    fn lattice_idempotence_and_extremes() {
        let g = fixtures::ex_k11();
        let a = imp(&[10], &[0]);
        let b = imp(&[0], &[10]);
        assert_eq!(lattice_meet(&g, &a, &a).unwrap(), a);
        assert_eq!(lattice_join(&g, &a, &a).unwrap(), a);
        assert_eq!(lattice_meet(&g, &a, &b).unwrap(), a);
        assert_eq!(lattice_join(&g, &a, &b).unwrap(), b);

        let g = fixtures::ex2();
        let (u_opt, v_opt) = extreme_imputations(&g);
        assert_eq!(lattice_meet(&g, &u_opt, &v_opt).unwrap(), u_opt);
        assert_eq!(lattice_join(&g, &u_opt, &v_opt).unwrap(), v_opt);
    }

    #[test]
    fn lattice_rejects_non_core_input() {
        let g = fixtures::ex2();
        let bad = imp(&[50, 10], &[50, 50, 0]);
        let good = imp(&[70, 30], &[30, 30, 0]);
        assert!(lattice_meet(&g, &bad, &good).is_err());
    }
}
