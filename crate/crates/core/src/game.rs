//! Assignment game instances: a weighted bipartite graph with strictly
//! positive edge weights, plus the imputation type that profit vectors and
//! dual solutions share.

use crate::rational::Rational;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

/// One side of the bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    U,
    V,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::U => Side::V,
            Side::V => Side::U,
        }
    }
}

/// A vertex identified by side and dense 0-based index within that side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub side: Side,
    pub index: usize,
}

impl Vertex {
    pub fn u(index: usize) -> Self {
        Vertex {
            side: Side::U,
            index,
        }
    }

    pub fn v(index: usize) -> Self {
        Vertex {
            side: Side::V,
            index,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::U => write!(f, "u{}", self.index + 1),
            Side::V => write!(f, "v{}", self.index + 1),
        }
    }
}

/// An edge of the instance, with its exact weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

/// Optional display labels for vertices; purely cosmetic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Names {
    pub u: Vec<String>,
    pub v: Vec<String>,
}

/// The game instance. Validated on construction: weights strictly positive,
/// no duplicate (u,v) pairs, indices in range, at least one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentGame {
    left_size: usize,
    right_size: usize,
    edges: Vec<Edge>,
    names: Option<Names>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("malformed instance JSON: {0}")]
    Syntax(String),
    #[error("non-positive weight on edge (u{u}, v{v})")]
    NonPositiveWeight { u: usize, v: usize },
    #[error("duplicate edge (u{u}, v{v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("edge {edge} references out-of-range {side} index {index}")]
    IndexOutOfRange {
        edge: usize,
        side: &'static str,
        index: usize,
    },
    #[error("instance has no edges")]
    NoEdges,
    #[error("names array for side {side} has length {got}, expected {expected}")]
    NamesLength {
        side: &'static str,
        got: usize,
        expected: usize,
    },
}

#[derive(Serialize, Deserialize)]
struct RawEdge {
    u: usize,
    v: usize,
    w: Rational,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    left: usize,
    right: usize,
    edges: Vec<RawEdge>,
    #[serde(skip_serializing_if = "Option::is_none")]
    names: Option<Names>,
}

impl AssignmentGame {
    pub fn new(
        left_size: usize,
        right_size: usize,
        edges: Vec<Edge>,
        names: Option<Names>,
    ) -> Result<Self, GameError> {
        if edges.is_empty() {
            return Err(GameError::NoEdges);
        }
        let mut seen = HashSet::new();
        for (k, e) in edges.iter().enumerate() {
            if e.u >= left_size {
                return Err(GameError::IndexOutOfRange {
                    edge: k,
                    side: "u",
                    index: e.u,
                });
            }
            if e.v >= right_size {
                return Err(GameError::IndexOutOfRange {
                    edge: k,
                    side: "v",
                    index: e.v,
                });
            }
            if !e.weight.is_positive() {
                return Err(GameError::NonPositiveWeight { u: e.u, v: e.v });
            }
            if !seen.insert((e.u, e.v)) {
                return Err(GameError::DuplicateEdge { u: e.u, v: e.v });
            }
        }
        if let Some(n) = &names {
            if n.u.len() != left_size {
                return Err(GameError::NamesLength {
                    side: "u",
                    got: n.u.len(),
                    expected: left_size,
                });
            }
            if n.v.len() != right_size {
                return Err(GameError::NamesLength {
                    side: "v",
                    got: n.v.len(),
                    expected: right_size,
                });
            }
        }
        let mut edges = edges;
        edges.sort_by_key(|e| (e.u, e.v));
        Ok(AssignmentGame {
            left_size,
            right_size,
            edges,
            names,
        })
    }

    /// Convenience constructor for integer-weight instances.
    pub fn from_weights(
        left_size: usize,
        right_size: usize,
        weighted_pairs: &[(usize, usize, i64)],
    ) -> Result<Self, GameError> {
        let edges = weighted_pairs
            .iter()
            .map(|&(u, v, w)| Edge {
                u,
                v,
                weight: Rational::from_int(w),
            })
            .collect();
        AssignmentGame::new(left_size, right_size, edges, None)
    }

    pub fn left_size(&self) -> usize {
        self.left_size
    }

    pub fn right_size(&self) -> usize {
        self.right_size
    }

    pub fn vertex_count(&self) -> usize {
        self.left_size + self.right_size
    }

    /// Edges in sorted (u, v) order; indices into this slice are stable edge ids.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn names(&self) -> Option<&Names> {
        self.names.as_ref()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges
            .binary_search_by_key(&(u, v), |e| (e.u, e.v))
            .ok()
    }

    pub fn vertex_label(&self, vertex: Vertex) -> String {
        match (&self.names, vertex.side) {
            (Some(n), Side::U) => n.u[vertex.index].clone(),
            (Some(n), Side::V) => n.v[vertex.index].clone(),
            _ => vertex.to_string(),
        }
    }

    /// Parses the JSON instance format:
    /// `{"left": n, "right": m, "edges": [{"u": 0, "v": 1, "w": 10}, ...]}`
    /// with weights as integers or `"p/q"` strings, plus an optional `names`
    /// object with `u`/`v` label arrays.
    pub fn parse(text: &str) -> Result<Self, GameError> {
        let raw: RawInstance =
            serde_json::from_str(text).map_err(|e| GameError::Syntax(e.to_string()))?;
        let edges = raw
            .edges
            .into_iter()
            .map(|e| Edge {
                u: e.u,
                v: e.v,
                weight: e.w,
            })
            .collect();
        AssignmentGame::new(raw.left, raw.right, edges, raw.names)
    }

    /// Byte-stable serialization: fixed key order, edges sorted by (u, v).
    pub fn to_json(&self) -> String {
        let raw = RawInstance {
            left: self.left_size,
            right: self.right_size,
            edges: self
                .edges
                .iter()
                .map(|e| RawEdge {
                    u: e.u,
                    v: e.v,
                    w: e.weight.clone(),
                })
                .collect(),
            names: self.names.clone(),
        };
        serde_json::to_string(&raw).expect("instance serialization cannot fail")
    }
}

/// Profit vectors for both sides; also plays the role of a dual solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Imputation {
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
}

impl Imputation {
    pub fn zeros(left_size: usize, right_size: usize) -> Self {
        Imputation {
            u: vec![Rational::zero(); left_size],
            v: vec![Rational::zero(); right_size],
        }
    }

    pub fn get(&self, vertex: Vertex) -> &Rational {
        match vertex.side {
            Side::U => &self.u[vertex.index],
            Side::V => &self.v[vertex.index],
        }
    }

    pub fn get_mut(&mut self, vertex: Vertex) -> &mut Rational {
        match vertex.side {
            Side::U => &mut self.u[vertex.index],
            Side::V => &mut self.v[vertex.index],
        }
    }

    pub fn total(&self) -> Rational {
        self.u.iter().sum::<Rational>() + self.v.iter().sum::<Rational>()
    }

    pub fn matches_dimensions(&self, game: &AssignmentGame) -> bool {
        self.u.len() == game.left_size() && self.v.len() == game.right_size()
    }

    pub fn parse(text: &str) -> Result<Self, GameError> {
        serde_json::from_str(text).map_err(|e| GameError::Syntax(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("imputation serialization cannot fail")
    }

    /// True when every entry has denominator 1 or 2.
    pub fn is_half_integral(&self) -> bool {
        self.u
            .iter()
            .chain(self.v.iter())
            .all(|x| x.is_half_integral())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const EX2_JSON: &str = r#"{"left":2,"right":3,"edges":[{"u":0,"v":0,"w":100},{"u":0,"v":1,"w":100},{"u":0,"v":2,"w":60},{"u":1,"v":1,"w":60}]}"#;

    #[test]
    fn parses_smallest_instance() {
        let g = AssignmentGame::parse(r#"{"left":1,"right":1,"edges":[{"u":0,"v":0,"w":10}]}"#)
            .unwrap();
        assert_eq!(g.left_size(), 1);
        assert_eq!(g.right_size(), 1);
        assert_eq!(g.edges().len(), 1);
        assert_eq!(g.edges()[0].weight, Rational::from_int(10));
    }

    #[test]
    fn fixture_round_trip() {
        let g = AssignmentGame::parse(EX2_JSON).unwrap();
        assert_eq!(g.left_size(), 2);
        assert_eq!(g.right_size(), 3);
        assert_eq!(g.edges().len(), 4);
        let back = AssignmentGame::parse(&g.to_json()).unwrap();
        assert_eq!(back, g);
        // byte stability
        assert_eq!(g.to_json(), back.to_json());
    }

    #[test]
    fn rejects_non_positive_weight() {
        let err = AssignmentGame::parse(r#"{"left":1,"right":1,"edges":[{"u":0,"v":0,"w":0}]}"#)
            .unwrap_err();
        assert_eq!(err, GameError::NonPositiveWeight { u: 0, v: 0 });
        let err =
            AssignmentGame::parse(r#"{"left":1,"right":1,"edges":[{"u":0,"v":0,"w":"-1/2"}]}"#)
                .unwrap_err();
        assert_eq!(err, GameError::NonPositiveWeight { u: 0, v: 0 });
    }

    #[test]
    fn rejects_duplicates_and_bad_indices() {
        let err = AssignmentGame::parse(
            r#"{"left":1,"right":2,"edges":[{"u":0,"v":0,"w":1},{"u":0,"v":0,"w":2}]}"#,
        )
        .unwrap_err();
        assert_eq!(err, GameError::DuplicateEdge { u: 0, v: 0 });
        let err = AssignmentGame::parse(r#"{"left":1,"right":1,"edges":[{"u":0,"v":1,"w":1}]}"#)
            .unwrap_err();
        assert!(matches!(err, GameError::IndexOutOfRange { .. }));
        let err = AssignmentGame::parse(r#"{"left":1,"right":1,"edges":[]}"#).unwrap_err();
        assert_eq!(err, GameError::NoEdges);
    }

    #[test]
    fn fractional_weights_parse_exactly() {
        let g = AssignmentGame::parse(r#"{"left":1,"right":1,"edges":[{"u":0,"v":0,"w":"7/2"}]}"#)
            .unwrap();
        assert_eq!(g.edges()[0].weight, Rational::parse("7/2").unwrap());
    }

    #[test]
    fn edge_order_is_canonical() {
        let g = AssignmentGame::parse(
            r#"{"left":2,"right":2,"edges":[{"u":1,"v":1,"w":1},{"u":0,"v":1,"w":2},{"u":0,"v":0,"w":3}]}"#,
        )
        .unwrap();
        let order: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(order, vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(g.edge_index(0, 1), Some(1));
        assert_eq!(g.edge_index(1, 0), None);
    }
}
