//! Solver for leximin and leximax core imputations of assignment games.
//!
//! An assignment game is a weighted bipartite graph whose worth is the weight
//! of a maximum matching; its core imputations are exactly the optimal duals
//! of the matching LP. This crate computes, with exact rational arithmetic
//! and no LP solver:
//!
//! - maximum-weight matchings with optimal duals ([`matching`]),
//! - essential / viable / subpar labels for vertices and edges
//!   ([`mod@classify`]),
//! - core membership checks and the U-/V-optimal lattice extremes
//!   ([`solutions`]),
//! - the unique leximin and leximax core imputations via an event-driven
//!   rotation mechanism ([`mechanism`]),
//! - an exhaustive brute-force oracle for desk-scale verification
//!   ([`oracle`]).
//!
//! The `lexicore` binary exposes all of this on the command line.
//!
//! ```
//! use lexicore::{fixtures, mechanism, Mode};
//!
//! let game = fixtures::ex2();
//! let (imputation, trace) = mechanism::run(&game, Mode::Leximin).unwrap();
//! assert_eq!(imputation.u[0].to_string(), "70");
//! assert_eq!(trace.events.len(), 4);
//! ```

pub mod classify;
pub mod fixtures;
pub mod game;
pub mod matching;
pub mod mechanism;
pub mod oracle;
pub mod profile;
pub mod rational;
pub mod report;
pub mod solutions;

pub use classify::{classify, is_non_degenerate, Classification, Label};
pub use game::{AssignmentGame, Edge, GameError, Imputation, Names, Side, Vertex};
pub use matching::{max_weight_matching, total_worth, worth, Matching, WorthQuery};
pub use mechanism::{run, run_from, run_with_options, MechanismError, RunOptions, Trace};
pub use oracle::{
    enumerate_matchings, oracle_classify, oracle_extremes, oracle_leximax, oracle_leximin,
    OracleError,
};
pub use profile::{compare_profiles, profile_of, Mode, Profile, ProfileError};
pub use rational::Rational;
pub use solutions::{
    check_core, extreme_imputations, initial_core_imputation, is_core, lattice_join, lattice_meet,
    CoreCheckReport, SolutionError,
};
