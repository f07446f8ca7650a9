//! Exact maximum-weight bipartite matching with optimal dual variables.
//!
//! The solver is a primal-dual (Hungarian, shortest-augmenting-path) method
//! run with rational potentials kept nonnegative throughout, so the final
//! duals are directly a feasible optimal solution of the profit-sharing dual:
//! `u_i + v_j >= w_ij` on every edge, matched edges tight, unmatched vertices
//! at zero. Matching is maximum-weight, not maximum-cardinality: a vertex
//! whose dual falls to zero may stay unmatched.

use crate::game::{AssignmentGame, Imputation, Vertex};
use crate::rational::Rational;

/// A matching together with its total weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// Matched (u, v) pairs, sorted by u index.
    pub pairs: Vec<(usize, usize)>,
    pub weight: Rational,
}

impl Matching {
    pub fn partner_of_u(&self, u: usize) -> Option<usize> {
        self.pairs
            .iter()
            .find_map(|&(a, b)| if a == u { Some(b) } else { None })
    }

    pub fn partner_of_v(&self, v: usize) -> Option<usize> {
        self.pairs
            .iter()
            .find_map(|&(a, b)| if b == v { Some(a) } else { None })
    }
}

/// Deletions applied to the game before a worth computation.
#[derive(Clone, Debug, Default)]
pub struct WorthQuery {
    pub removed_vertices: Vec<Vertex>,
    pub removed_edges: Vec<(usize, usize)>,
}

impl WorthQuery {
    pub fn without_vertex(q: Vertex) -> Self {
        WorthQuery {
            removed_vertices: vec![q],
            removed_edges: Vec::new(),
        }
    }

    pub fn without_edge(u: usize, v: usize) -> Self {
        WorthQuery {
            removed_vertices: Vec::new(),
            removed_edges: vec![(u, v)],
        }
    }

    pub fn without_vertices(u: usize, v: usize) -> Self {
        WorthQuery {
            removed_vertices: vec![Vertex::u(u), Vertex::v(v)],
            removed_edges: Vec::new(),
        }
    }
}

struct Solver {
    nu: usize,
    nv: usize,
    adj: Vec<Vec<(usize, Rational)>>,
    u: Vec<Rational>,
    v: Vec<Rational>,
    match_u: Vec<Option<usize>>,
    match_v: Vec<Option<usize>>,
}

impl Solver {
    fn new(nu: usize, nv: usize, edges: &[(usize, usize, Rational)]) -> Self {
        let mut adj = vec![Vec::new(); nu];
        for (a, b, w) in edges {
            adj[*a].push((*b, w.clone()));
        }
        for list in &mut adj {
            list.sort_by_key(|(b, _)| *b);
        }
        // feasible start: u_i covers its heaviest edge, v_j = 0
        let u = adj
            .iter()
            .map(|list| {
                list.iter()
                    .map(|(_, w)| w.clone())
                    .max()
                    .unwrap_or_else(Rational::zero)
            })
            .collect();
        Solver {
            nu,
            nv,
            adj,
            u,
            v: vec![Rational::zero(); nv],
            match_u: vec![None; nu],
            match_v: vec![None; nv],
        }
    }

    fn solve(&mut self) {
        for root in 0..self.nu {
            if self.match_u[root].is_none() && self.u[root].is_positive() {
                self.phase(root);
            }
        }
        debug_assert!(self.check_optimality());
    }

    /// Grows an alternating tree of tight edges from `root`. Ends by
    /// augmenting to a free right vertex, by the root's dual reaching zero
    /// (root stays unmatched), or by releasing a zero-dual matched left
    /// vertex in favor of the tree path.
    fn phase(&mut self, root: usize) {
        let mut in_t = vec![false; self.nv];
        let mut prev_v: Vec<Option<usize>> = vec![None; self.nv];
        let mut tree = vec![root];
        let mut in_s = vec![false; self.nu];
        in_s[root] = true;

        loop {
            let mut grew = false;
            let mut scan = 0;
            while scan < tree.len() {
                let a = tree[scan];
                scan += 1;
                for k in 0..self.adj[a].len() {
                    let (b, w) = self.adj[a][k].clone();
                    if in_t[b] || &self.u[a] + &self.v[b] != w {
                        continue;
                    }
                    in_t[b] = true;
                    prev_v[b] = Some(a);
                    match self.match_v[b] {
                        None => {
                            self.augment(b, &prev_v);
                            return;
                        }
                        Some(a2) => {
                            if !in_s[a2] {
                                in_s[a2] = true;
                                tree.push(a2);
                                grew = true;
                            }
                        }
                    }
                }
            }
            if grew {
                continue;
            }

            if self.u[root].is_zero() {
                return; // root retires unmatched at zero dual
            }
            if let Some(&a0) = tree.iter().find(|&&a| self.u[a].is_zero()) {
                // a0 != root here; hand its partner to the tree path
                let b0 = self.match_u[a0].expect("non-root tree vertices are matched");
                self.match_u[a0] = None;
                self.augment(b0, &prev_v);
                return;
            }

            let mut delta: Option<Rational> = None;
            for &a in &tree {
                for (b, w) in &self.adj[a] {
                    if in_t[*b] {
                        continue;
                    }
                    let slack = &(&self.u[a] + &self.v[*b]) - w;
                    debug_assert!(!slack.is_negative());
                    if delta.as_ref().is_none_or(|d| slack < *d) {
                        delta = Some(slack);
                    }
                }
                if delta.as_ref().is_none_or(|d| self.u[a] < *d) {
                    delta = Some(self.u[a].clone());
                }
            }
            let delta = delta.expect("tree is nonempty");
            debug_assert!(delta.is_positive());
            for &a in &tree {
                self.u[a] = &self.u[a] - &delta;
            }
            for (b, reached) in in_t.iter().enumerate() {
                if *reached {
                    self.v[b] = &self.v[b] + &delta;
                }
            }
        }
    }

    fn augment(&mut self, to_v: usize, prev_v: &[Option<usize>]) {
        let mut b = to_v;
        loop {
            let a = prev_v[b].expect("augmenting path reaches the root");
            let next = self.match_u[a];
            self.match_v[b] = Some(a);
            self.match_u[a] = Some(b);
            match next {
                None => break,
                Some(pb) => b = pb,
            }
        }
    }

    fn check_optimality(&self) -> bool {
        for (a, list) in self.adj.iter().enumerate() {
            for (b, w) in list {
                if &self.u[a] + &self.v[*b] < *w {
                    return false;
                }
            }
        }
        for (a, m) in self.match_u.iter().enumerate() {
            match m {
                Some(b) => {
                    let w = self.adj[a].iter().find(|(x, _)| x == b).map(|(_, w)| w);
                    if w.is_none_or(|w| &self.u[a] + &self.v[*b] != *w) {
                        return false;
                    }
                }
                None => {
                    if !self.u[a].is_zero() {
                        return false;
                    }
                }
            }
        }
        self.match_v
            .iter()
            .zip(&self.v)
            .all(|(m, vb)| m.is_some() || vb.is_zero())
    }

    fn into_result(self) -> (Matching, Imputation) {
        let mut pairs: Vec<(usize, usize)> = self
            .match_u
            .iter()
            .enumerate()
            .filter_map(|(a, m)| m.map(|b| (a, b)))
            .collect();
        pairs.sort_unstable();
        let weight = pairs
            .iter()
            .map(|&(a, b)| {
                self.adj[a]
                    .iter()
                    .find(|(x, _)| *x == b)
                    .map(|(_, w)| w.clone())
                    .expect("matched pair is an edge")
            })
            .sum();
        (
            Matching { pairs, weight },
            Imputation {
                u: self.u,
                v: self.v,
            },
        )
    }
}

fn solve_raw(nu: usize, nv: usize, edges: &[(usize, usize, Rational)]) -> (Matching, Imputation) {
    let mut solver = Solver::new(nu, nv, edges);
    solver.solve();
    solver.into_result()
}

/// Maximum-weight matching plus an optimal dual. The dual doubles as a core
/// imputation: feasible, tight on matched edges, zero on unmatched vertices,
/// with total equal to the matching weight.
pub fn max_weight_matching(game: &AssignmentGame) -> (Matching, Imputation) {
    let edges: Vec<(usize, usize, Rational)> = game
        .edges()
        .iter()
        .map(|e| (e.u, e.v, e.weight.clone()))
        .collect();
    let (matching, dual) = solve_raw(game.left_size(), game.right_size(), &edges);
    debug_assert_eq!(dual.total(), matching.weight, "strong duality");
    (matching, dual)
}

/// Worth of the game after deleting the queried vertices and edges; the
/// empty game has worth 0. Recomputed from scratch per query.
pub fn worth(game: &AssignmentGame, query: &WorthQuery) -> Rational {
    let mut gone_u = vec![false; game.left_size()];
    let mut gone_v = vec![false; game.right_size()];
    for q in &query.removed_vertices {
        match q.side {
            crate::game::Side::U => gone_u[q.index] = true,
            crate::game::Side::V => gone_v[q.index] = true,
        }
    }
    let edges: Vec<(usize, usize, Rational)> = game
        .edges()
        .iter()
        .filter(|e| !gone_u[e.u] && !gone_v[e.v] && !query.removed_edges.contains(&(e.u, e.v)))
        .map(|e| (e.u, e.v, e.weight.clone()))
        .collect();
    solve_raw(game.left_size(), game.right_size(), &edges)
        .0
        .weight
}

/// Worth of the unrestricted game.
pub fn total_worth(game: &AssignmentGame) -> Rational {
    worth(game, &WorthQuery::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::Rational;

    #[test]
    fn single_edge_game() {
        let g = fixtures::ex_k11();
        let (m, dual) = max_weight_matching(&g);
        assert_eq!(m.pairs, vec![(0, 0)]);
        assert_eq!(m.weight, Rational::from_int(10));
        assert_eq!(dual.total(), Rational::from_int(10));
        assert!(!dual.u[0].is_negative() && !dual.v[0].is_negative());
    }

    #[test]
    fn ex2_unique_maximum() {
        let g = fixtures::ex2();
        let (m, dual) = max_weight_matching(&g);
        assert_eq!(m.pairs, vec![(0, 0), (1, 1)]);
        assert_eq!(m.weight, Rational::from_int(160));
        assert_eq!(dual.total(), Rational::from_int(160));
        // every matched edge tight
        for &(a, b) in &m.pairs {
            let e = &g.edges()[g.edge_index(a, b).unwrap()];
            assert_eq!(&dual.u[a] + &dual.v[b], e.weight);
        }
    }

    #[test]
    fn tied_maximum_still_optimal() {
        let g = fixtures::ex_vu();
        let (m, dual) = max_weight_matching(&g);
        assert_eq!(m.weight, Rational::from_int(100));
        assert_eq!(m.pairs.len(), 1);
        assert_eq!(dual.total(), Rational::from_int(100));
    }

    #[test]
    fn releases_zero_dual_vertex() {
        // r prefers b strongly; a must surrender b and retire at zero dual
        let g = AssignmentGame::from_weights(2, 1, &[(0, 0, 10), (1, 0, 4)]).unwrap();
        let (m, dual) = max_weight_matching(&g);
        assert_eq!(m.pairs, vec![(0, 0)]);
        assert_eq!(m.weight, Rational::from_int(10));
        assert!(dual.u[1].is_zero());
        // edge (1,0) must not be under-tight
        assert!(&dual.u[1] + &dual.v[0] >= Rational::from_int(4));
    }

    #[test]
    fn worth_queries_on_ex2() {
        let g = fixtures::ex2();
        assert_eq!(worth(&g, &WorthQuery::default()), Rational::from_int(160));
        assert_eq!(
            worth(&g, &WorthQuery::without_edge(0, 0)),
            Rational::from_int(120)
        );
        assert_eq!(
            worth(&g, &WorthQuery::without_vertex(Vertex::u(0))),
            Rational::from_int(60)
        );
        // removing everything leaves the empty game
        let all = WorthQuery {
            removed_vertices: (0..2).map(Vertex::u).chain((0..3).map(Vertex::v)).collect(),
            removed_edges: vec![],
        };
        assert_eq!(worth(&g, &all), Rational::zero());
    }

    #[test]
    fn monotone_under_removal() {
        let g = fixtures::ex2();
        let full = total_worth(&g);
        for e in g.edges() {
            assert!(worth(&g, &WorthQuery::without_edge(e.u, e.v)) <= full);
        }
        for i in 0..g.left_size() {
            assert!(worth(&g, &WorthQuery::without_vertex(Vertex::u(i))) <= full);
        }
        for j in 0..g.right_size() {
            assert!(worth(&g, &WorthQuery::without_vertex(Vertex::v(j))) <= full);
        }
    }

    #[test]
    fn integral_duals_on_integer_weights() {
        let g = fixtures::ex2();
        let (_, dual) = max_weight_matching(&g);
        assert!(dual.u.iter().chain(dual.v.iter()).all(|x| x.is_integer()));
    }

    #[test]
    fn fractional_weights_exact() {
        let g = AssignmentGame::parse(
            r#"{"left":1,"right":2,"edges":[{"u":0,"v":0,"w":"7/2"},{"u":0,"v":1,"w":"10/3"}]}"#,
        )
        .unwrap();
        let (m, dual) = max_weight_matching(&g);
        assert_eq!(m.weight, Rational::parse("7/2").unwrap());
        assert_eq!(dual.total(), m.weight);
    }
}
