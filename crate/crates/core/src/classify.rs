//! Vertex and edge classification by participation in maximum-weight
//! matchings: essential (in every one), viable (in some but not all),
//! subpar (in none). Decided through worth queries, never by enumerating
//! matchings.

use crate::game::{AssignmentGame, Vertex};
use crate::matching::{total_worth, worth, WorthQuery};
use crate::rational::Rational;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Essential,
    Viable,
    Subpar,
}

/// Labels for every vertex and edge, plus the cached total worth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub u_labels: Vec<Label>,
    pub v_labels: Vec<Label>,
    /// Indexed like `game.edges()`.
    pub edge_labels: Vec<Label>,
    pub worth: Rational,
}

impl Classification {
    pub fn vertex_label(&self, q: Vertex) -> Label {
        match q.side {
            crate::game::Side::U => self.u_labels[q.index],
            crate::game::Side::V => self.v_labels[q.index],
        }
    }

    pub fn is_essential(&self, q: Vertex) -> bool {
        self.vertex_label(q) == Label::Essential
    }

    /// Essential vertices in u0..,v0.. order.
    pub fn essential_vertices(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        for (i, l) in self.u_labels.iter().enumerate() {
            if *l == Label::Essential {
                out.push(Vertex::u(i));
            }
        }
        for (j, l) in self.v_labels.iter().enumerate() {
            if *l == Label::Essential {
                out.push(Vertex::v(j));
            }
        }
        out
    }

    /// Edge ids of the always-tight (essential or viable) edges.
    pub fn always_tight_edges(&self) -> Vec<usize> {
        self.edge_labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l != Label::Subpar)
            .map(|(k, _)| k)
            .collect()
    }
}

/// Classifies every edge and vertex.
///
/// Edge e: essential iff removing e lowers the worth. A non-essential
/// e = (i,j) of weight w is viable iff the game without both endpoints is
/// worth exactly `worth - w` (e belongs to some maximum matching); otherwise
/// subpar. Vertex q: essential iff removing q lowers the worth, else viable
/// if a viable edge touches it, else subpar. Every non-essential edge gets
/// its own independent viability query.
pub fn classify(game: &AssignmentGame) -> Classification {
    let w_max = total_worth(game);
    let mut edge_labels = Vec::with_capacity(game.edges().len());
    for e in game.edges() {
        let without = worth(game, &WorthQuery::without_edge(e.u, e.v));
        debug_assert!(without <= w_max);
        if without < w_max {
            edge_labels.push(Label::Essential);
        } else {
            let both_gone = worth(game, &WorthQuery::without_vertices(e.u, e.v));
            if &both_gone + &e.weight == w_max {
                edge_labels.push(Label::Viable);
            } else {
                edge_labels.push(Label::Subpar);
            }
        }
    }

    let mut viable_u = vec![false; game.left_size()];
    let mut viable_v = vec![false; game.right_size()];
    for (k, e) in game.edges().iter().enumerate() {
        if edge_labels[k] == Label::Viable {
            viable_u[e.u] = true;
            viable_v[e.v] = true;
        }
    }

    let vertex_label = |q: Vertex, has_viable: bool| {
        let without = worth(game, &WorthQuery::without_vertex(q));
        debug_assert!(without <= w_max);
        if without < w_max {
            Label::Essential
        } else if has_viable {
            Label::Viable
        } else {
            Label::Subpar
        }
    };
    let u_labels = (0..game.left_size())
        .map(|i| vertex_label(Vertex::u(i), viable_u[i]))
        .collect();
    let v_labels = (0..game.right_size())
        .map(|j| vertex_label(Vertex::v(j), viable_v[j]))
        .collect();

    Classification {
        u_labels,
        v_labels,
        edge_labels,
        worth: w_max,
    }
}

/// True iff the maximum-weight matching is unique, i.e. nothing is viable.
pub fn is_non_degenerate(classification: &Classification) -> bool {
    classification
        .u_labels
        .iter()
        .chain(classification.v_labels.iter())
        .chain(classification.edge_labels.iter())
        .all(|l| *l != Label::Viable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn ex2_labels() {
        let g = fixtures::ex2();
        let c = classify(&g);
        let by_pair = |u, v| c.edge_labels[g.edge_index(u, v).unwrap()];
        assert_eq!(by_pair(0, 0), Label::Essential);
        assert_eq!(by_pair(1, 1), Label::Essential);
        assert_eq!(by_pair(0, 1), Label::Subpar);
        assert_eq!(by_pair(0, 2), Label::Subpar);
        assert_eq!(c.u_labels, vec![Label::Essential, Label::Essential]);
        assert_eq!(
            c.v_labels,
            vec![Label::Essential, Label::Essential, Label::Subpar]
        );
        assert!(is_non_degenerate(&c));
    }

    #[test]
    fn tied_edges_are_viable() {
        let g = fixtures::ex_vu();
        let c = classify(&g);
        assert_eq!(c.edge_labels, vec![Label::Viable, Label::Viable]);
        assert_eq!(c.u_labels, vec![Label::Essential]);
        assert_eq!(c.v_labels, vec![Label::Viable, Label::Viable]);
        assert!(!is_non_degenerate(&c));
    }

    #[test]
    fn balanced_viable_component() {
        let g = fixtures::ex_vb();
        let c = classify(&g);
        assert!(c.edge_labels.iter().all(|l| *l == Label::Viable));
        assert_eq!(c.u_labels, vec![Label::Essential, Label::Viable]);
        assert_eq!(c.v_labels, vec![Label::Viable, Label::Essential]);
    }

    #[test]
    fn single_edge_non_degenerate() {
        let c = classify(&fixtures::ex_k11());
        assert_eq!(c.edge_labels, vec![Label::Essential]);
        assert!(is_non_degenerate(&c));
    }

    #[test]
    fn essential_edge_endpoints_are_essential() {
        for g in [
            fixtures::ex_k11(),
            fixtures::ex_sub(),
            fixtures::ex_vu(),
            fixtures::ex_vb(),
            fixtures::ex2(),
        ] {
            let c = classify(&g);
            for (k, e) in g.edges().iter().enumerate() {
                match c.edge_labels[k] {
                    Label::Essential => {
                        assert_eq!(c.u_labels[e.u], Label::Essential);
                        assert_eq!(c.v_labels[e.v], Label::Essential);
                    }
                    Label::Viable => {
                        assert_ne!(c.u_labels[e.u], Label::Subpar);
                        assert_ne!(c.v_labels[e.v], Label::Subpar);
                    }
                    Label::Subpar => {}
                }
            }
        }
    }
}
