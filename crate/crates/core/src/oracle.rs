//! Brute-force ground truth for desk-scale verification.
//!
//! Nothing here goes through the matching engine, the classifier or the
//! mechanism: matchings are enumerated exhaustively, labels fall out of the
//! enumeration, and optimal imputations come from a search over the
//! half-integral grid (weights are rescaled to integers first; sorted-profile
//! order is invariant under uniform positive scaling, and on integer-weight
//! games the optima are half-integral, so the grid is complete).

use crate::classify::Label;
use crate::game::{AssignmentGame, Imputation};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

/// Enumeration guard; 2^14 edge subsets is the most we ever walk.
pub const MAX_ORACLE_EDGES: usize = 14;
/// Grid-search guards: essential-vertex count and total grid volume decide
/// whether the search can finish; the weight bound only protects the i64
/// arithmetic.
pub const MAX_ESSENTIAL: usize = 8;
pub const MAX_SCALED_WEIGHT: i64 = 1_000_000;
pub const MAX_GRID_VOLUME: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large for the oracle: {0}")]
    GuardExceeded(String),
    #[error("oracle internal inconsistency: {0}")]
    Internal(String),
}

/// One matching found by enumeration (edge ids into `game.edges()`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedMatching {
    pub edge_ids: Vec<usize>,
    pub weight: Rational,
}

/// All matchings of the game, the empty one included.
pub fn enumerate_matchings(game: &AssignmentGame) -> Result<Vec<EnumeratedMatching>, OracleError> {
    if game.edges().len() > MAX_ORACLE_EDGES {
        return Err(OracleError::GuardExceeded(format!(
            "{} edges, enumeration allows at most {}",
            game.edges().len(),
            MAX_ORACLE_EDGES
        )));
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used_u = vec![false; game.left_size()];
    let mut used_v = vec![false; game.right_size()];
    fn recurse(
        game: &AssignmentGame,
        k: usize,
        chosen: &mut Vec<usize>,
        used_u: &mut [bool],
        used_v: &mut [bool],
        out: &mut Vec<EnumeratedMatching>,
    ) {
        if k == game.edges().len() {
            out.push(EnumeratedMatching {
                edge_ids: chosen.clone(),
                weight: chosen
                    .iter()
                    .map(|&id| game.edges()[id].weight.clone())
                    .sum(),
            });
            return;
        }
        recurse(game, k + 1, chosen, used_u, used_v, out);
        let e = &game.edges()[k];
        if !used_u[e.u] && !used_v[e.v] {
            used_u[e.u] = true;
            used_v[e.v] = true;
            chosen.push(k);
            recurse(game, k + 1, chosen, used_u, used_v, out);
            chosen.pop();
            used_u[e.u] = false;
            used_v[e.v] = false;
        }
    }
    recurse(game, 0, &mut chosen, &mut used_u, &mut used_v, &mut out);
    Ok(out)
}

/// Labels derived purely from the enumeration of maximum-weight matchings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleLabels {
    pub u_labels: Vec<Label>,
    pub v_labels: Vec<Label>,
    pub edge_labels: Vec<Label>,
    pub worth: Rational,
}

pub fn oracle_classify(game: &AssignmentGame) -> Result<OracleLabels, OracleError> {
    let all = enumerate_matchings(game)?;
    let worth = all
        .iter()
        .map(|m| m.weight.clone())
        .max()
        .expect("enumeration includes the empty matching");
    let maxima: Vec<&EnumeratedMatching> = all.iter().filter(|m| m.weight == worth).collect();
    let total = maxima.len();

    let mut edge_hits = vec![0usize; game.edges().len()];
    let mut u_hits = vec![0usize; game.left_size()];
    let mut v_hits = vec![0usize; game.right_size()];
    for m in &maxima {
        for &id in &m.edge_ids {
            edge_hits[id] += 1;
            u_hits[game.edges()[id].u] += 1;
            v_hits[game.edges()[id].v] += 1;
        }
    }
    let label = |hits: usize| {
        if hits == total {
            Label::Essential
        } else if hits > 0 {
            Label::Viable
        } else {
            Label::Subpar
        }
    };
    Ok(OracleLabels {
        u_labels: u_hits.iter().map(|&h| label(h)).collect(),
        v_labels: v_hits.iter().map(|&h| label(h)).collect(),
        edge_labels: edge_hits.iter().map(|&h| label(h)).collect(),
        worth,
    })
}

#[derive(Clone, Copy)]
enum Objective {
    Leximin,
    Leximax,
    MaxSumU,
    MaxSumV,
}

/// The game rescaled so every weight is the even integer `2 * L * w`; all
/// candidate profits then live on the integer lattice.
struct ScaledSearch {
    nu: usize,
    nv: usize,
    /// (u, v, doubled scaled weight, always tight)
    edges: Vec<(usize, usize, i64, bool)>,
    worth2: i64,
    essential: Vec<bool>,              // dense: u0.. then v0..
    enumerated: Vec<usize>,            // dense vertex ids assigned by the odometer
    caps: Vec<i64>,                    // grid cap per enumerated vertex
    derived: Vec<(usize, usize, i64)>, // (dense vertex, anchor dense vertex, w2)
    scale: BigInt,                     // profits are value / (2 * L)
}

impl ScaledSearch {
    fn build(game: &AssignmentGame) -> Result<Self, OracleError> {
        // common denominator, then double for half-integrality
        let mut lcm = BigInt::one();
        for e in game.edges() {
            lcm = lcm.lcm(e.weight.denom());
        }
        let scale = &lcm * BigInt::from(2);
        let mut edges = Vec::with_capacity(game.edges().len());
        for e in game.edges() {
            let scaled_int = e.weight.numer() * (&lcm / e.weight.denom());
            match scaled_int.to_i64() {
                Some(w) if w <= MAX_SCALED_WEIGHT => edges.push((e.u, e.v, 2 * w, false)),
                _ => {
                    return Err(OracleError::GuardExceeded(format!(
                        "rescaled weight {} exceeds {}",
                        scaled_int, MAX_SCALED_WEIGHT
                    )))
                }
            }
        }

        let labels = oracle_classify(game)?;
        let worth2 = {
            let scaled = labels.worth.numer() * (&scale / labels.worth.denom());
            scaled
                .to_i64()
                .ok_or_else(|| OracleError::Internal("worth does not fit".into()))?
        };
        for (k, slot) in edges.iter_mut().enumerate() {
            slot.3 = labels.edge_labels[k] != Label::Subpar;
        }

        let nu = game.left_size();
        let nv = game.right_size();
        let mut essential = vec![false; nu + nv];
        for (i, l) in labels.u_labels.iter().enumerate() {
            essential[i] = *l == Label::Essential;
        }
        for (j, l) in labels.v_labels.iter().enumerate() {
            essential[nu + j] = *l == Label::Essential;
        }
        let essential_count = essential.iter().filter(|b| **b).count();
        if essential_count > MAX_ESSENTIAL {
            return Err(OracleError::GuardExceeded(format!(
                "{} essential vertices, grid search allows at most {}",
                essential_count, MAX_ESSENTIAL
            )));
        }

        // enumerate the smaller essential side, derive the other through an
        // always-tight anchor edge (every essential vertex has one)
        let ess_u = essential[..nu].iter().filter(|b| **b).count();
        let ess_v = essential[nu..].iter().filter(|b| **b).count();
        let enumerate_u = ess_u <= ess_v;

        let mut search = ScaledSearch {
            nu,
            nv,
            edges,
            worth2,
            essential,
            enumerated: Vec::new(),
            caps: Vec::new(),
            derived: Vec::new(),
            scale,
        };

        let mut volume: u128 = 1;
        for d in 0..nu + nv {
            if !search.essential[d] {
                continue;
            }
            let on_u = d < nu;
            let tight_ws: Vec<i64> = search
                .edges
                .iter()
                .filter(|(a, b, _, tight)| *tight && (if on_u { *a == d } else { nu + *b == d }))
                .map(|(_, _, w2, _)| *w2)
                .collect();
            let cap = tight_ws.iter().min().copied().ok_or_else(|| {
                OracleError::Internal("essential vertex with no always-tight edge".into())
            })?;
            if on_u == enumerate_u {
                volume = volume.saturating_mul(cap as u128 + 1);
                search.enumerated.push(d);
                search.caps.push(cap);
            } else {
                // anchor through the lowest-indexed always-tight edge
                let (a, b, w2, _) = *search
                    .edges
                    .iter()
                    .find(|(a, b, _, tight)| *tight && (if on_u { *a == d } else { nu + *b == d }))
                    .expect("checked above");
                let anchor = if on_u { nu + b } else { a };
                search.derived.push((d, anchor, w2));
            }
        }
        if volume > MAX_GRID_VOLUME {
            return Err(OracleError::GuardExceeded(format!(
                "grid volume {} exceeds {}",
                volume, MAX_GRID_VOLUME
            )));
        }
        Ok(search)
    }

    /// Fills `values` from the odometer state; false when the point leaves
    /// the core (negative profits, under-tight or broken-tight edges, wrong
    /// total).
    fn realize(&self, odometer: &[i64], values: &mut [i64]) -> bool {
        values.fill(0);
        for (slot, &d) in self.enumerated.iter().enumerate() {
            values[d] = odometer[slot];
        }
        for &(d, anchor, w2) in &self.derived {
            let x = w2 - values[anchor];
            if x < 0 {
                return false;
            }
            values[d] = x;
        }
        let mut total = 0i64;
        for v in values.iter() {
            total += *v;
        }
        if total != self.worth2 {
            return false;
        }
        for &(a, b, w2, tight) in &self.edges {
            let s = values[a] + values[self.nu + b];
            if s < w2 || (tight && s != w2) {
                return false;
            }
        }
        true
    }

    fn search(&self, objective: Objective) -> Result<Vec<i64>, OracleError> {
        let n = self.nu + self.nv;
        let mut values = vec![0i64; n];
        let mut odometer = vec![0i64; self.enumerated.len()];
        let mut best: Option<Vec<i64>> = None;
        let mut best_key: Vec<i64> = Vec::new();
        let mut key = Vec::new();

        loop {
            if self.realize(&odometer, &mut values) {
                key.clear();
                match objective {
                    Objective::Leximin => {
                        key.extend((0..n).filter(|&d| self.essential[d]).map(|d| values[d]));
                        key.sort_unstable();
                    }
                    Objective::Leximax => {
                        // negate so "lexicographically larger key" always means better
                        key.extend((0..n).filter(|&d| self.essential[d]).map(|d| values[d]));
                        key.sort_unstable_by(|a, b| b.cmp(a));
                        for x in key.iter_mut() {
                            *x = -*x;
                        }
                    }
                    Objective::MaxSumU => key.push(values[..self.nu].iter().sum()),
                    Objective::MaxSumV => key.push(values[self.nu..].iter().sum()),
                }
                if best.is_none() || key > best_key {
                    best = Some(values.clone());
                    best_key = key.clone();
                }
            }
            // odometer step
            let mut slot = 0;
            loop {
                if slot == odometer.len() {
                    return best.ok_or_else(|| {
                        OracleError::Internal("no grid point passed the core check".into())
                    });
                }
                if odometer[slot] < self.caps[slot] {
                    odometer[slot] += 1;
                    break;
                }
                odometer[slot] = 0;
                slot += 1;
            }
        }
    }

    fn to_imputation(&self, values: &[i64]) -> Imputation {
        let conv = |x: i64| Rational::new(BigInt::from(x), self.scale.clone());
        Imputation {
            u: values[..self.nu].iter().map(|&x| conv(x)).collect(),
            v: values[self.nu..].iter().map(|&x| conv(x)).collect(),
        }
    }
}

fn grid_optimum(game: &AssignmentGame, objective: Objective) -> Result<Imputation, OracleError> {
    let search = ScaledSearch::build(game)?;
    let best = search.search(objective)?;
    Ok(search.to_imputation(&best))
}

/// The unique core imputation whose ascending essential-profit list is
/// lexicographically largest.
pub fn oracle_leximin(game: &AssignmentGame) -> Result<Imputation, OracleError> {
    grid_optimum(game, Objective::Leximin)
}

/// The unique core imputation whose descending essential-profit list is
/// lexicographically smallest.
pub fn oracle_leximax(game: &AssignmentGame) -> Result<Imputation, OracleError> {
    grid_optimum(game, Objective::Leximax)
}

/// Grid argmax of the U-side total and of the V-side total.
pub fn oracle_extremes(game: &AssignmentGame) -> Result<(Imputation, Imputation), OracleError> {
    Ok((
        grid_optimum(game, Objective::MaxSumU)?,
        grid_optimum(game, Objective::MaxSumV)?,
    ))
}
