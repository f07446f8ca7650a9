//! Canonical desk-size instances used throughout the test-suite and docs.

use crate::game::AssignmentGame;

/// Single edge u1–v1 of weight 10.
pub fn ex_k11() -> AssignmentGame {
    AssignmentGame::from_weights(1, 1, &[(0, 0, 10)]).unwrap()
}

/// One seller, two buyers, weights 100/60; the lighter edge never matches.
pub fn ex_sub() -> AssignmentGame {
    AssignmentGame::from_weights(1, 2, &[(0, 0, 100), (0, 1, 60)]).unwrap()
}

/// One seller, two buyers tied at 100: both edges viable, unique imputation.
pub fn ex_vu() -> AssignmentGame {
    AssignmentGame::from_weights(1, 2, &[(0, 0, 100), (0, 1, 100)]).unwrap()
}

/// 2x2 with two tied maximum matchings and a unique imputation (60,0,0,40).
pub fn ex_vb() -> AssignmentGame {
    AssignmentGame::from_weights(2, 2, &[(0, 0, 60), (0, 1, 100), (1, 1, 40)]).unwrap()
}

/// 2x3 instance whose leximin run exercises a legitimate-edge merge.
pub fn ex2() -> AssignmentGame {
    AssignmentGame::from_weights(2, 3, &[(0, 0, 100), (0, 1, 100), (0, 2, 60), (1, 1, 60)]).unwrap()
}

/// JSON form of [`ex2`], matching its byte-stable serialization.
pub fn ex2_json() -> String {
    ex2().to_json()
}
