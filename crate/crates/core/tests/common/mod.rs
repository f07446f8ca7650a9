//! Shared helpers for the integration suites. Not every suite uses every
//! helper.
#![allow(dead_code)]

use lexicore::game::{AssignmentGame, Imputation};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub fn suite_rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xC0FE_BEEF ^ salt)
}

/// Random instance with |U|,|V| in 1..=4, edge probability 0.6, integer
/// weights in 1..=8. Regenerates until at least one edge exists.
pub fn random_game(rng: &mut ChaCha8Rng) -> AssignmentGame {
    loop {
        let nu = rng.random_range(1..=4);
        let nv = rng.random_range(1..=4);
        let mut edges = Vec::new();
        for i in 0..nu {
            for j in 0..nv {
                if rng.random_bool(0.6) {
                    edges.push((i, j, rng.random_range(1..=8i64)));
                }
            }
        }
        if !edges.is_empty() {
            return AssignmentGame::from_weights(nu, nv, &edges).unwrap();
        }
    }
}

pub struct Relabeling {
    pub game: AssignmentGame,
    pub perm_u: Vec<usize>,
    pub perm_v: Vec<usize>,
}

/// Applies a random permutation to each side's indices.
pub fn relabel(game: &AssignmentGame, rng: &mut ChaCha8Rng) -> Relabeling {
    let mut perm_u: Vec<usize> = (0..game.left_size()).collect();
    let mut perm_v: Vec<usize> = (0..game.right_size()).collect();
    perm_u.shuffle(rng);
    perm_v.shuffle(rng);
    let edges: Vec<(usize, usize, i64)> = game
        .edges()
        .iter()
        .map(|e| {
            let w = e.weight.numer().try_into().expect("integer weights");
            (perm_u[e.u], perm_v[e.v], w)
        })
        .collect();
    Relabeling {
        game: AssignmentGame::from_weights(game.left_size(), game.right_size(), &edges).unwrap(),
        perm_u,
        perm_v,
    }
}

/// Maps an imputation of the relabeled game back to original indices.
pub fn unrelabel(imp: &Imputation, r: &Relabeling) -> Imputation {
    Imputation {
        u: (0..imp.u.len())
            .map(|i| imp.u[r.perm_u[i]].clone())
            .collect(),
        v: (0..imp.v.len())
            .map(|j| imp.v[r.perm_v[j]].clone())
            .collect(),
    }
}
