//! The repeated three-goods "I cut, you choose" game.
//!
//! Each round the cutter throws one of three foods away, the chooser eats one
//! of the remaining two and the cutter eats what is left. This crate computes
//! the exact long-run diets of both players, solves for the strategy pairs
//! that give both players an even diet, classifies the chooser's pairwise
//! preferences, and checks all of it by seeded simulation and exhaustive grid
//! search.
//!
//! The only fair pairs are the uniform cutter together with a chooser whose
//! three `t` coordinates agree, and every such chooser prefers foods in a
//! cycle (or is indifferent at `t = 0`).
//!
//! With the default `parallel` feature, [`solver::grid_search`] and
//! [`simulator::simulate_batch`] run on the rayon pool. Without it they fall
//! back to the sequential versions, which are always available.

pub mod cli;
pub mod diet;
pub mod election;
pub mod error;
pub mod simulator;
pub mod solver;
pub mod strategy;

pub use diet::{diet_profile, fairness_residual, DietProfile, FairnessReport};
pub use election::{to_election_report, ElectionReport};
pub use error::{Error, Result};
pub use simulator::{
    check_convergence, play_round, simulate, ConvergenceReport, RngSeed, RoundRecord,
    SimulationResult,
};
pub use solver::{
    grid_search, residual_system, solve_chooser_given_cutter, solve_joint, verify_uniqueness,
    FeasibilityResult, GridSearchConfig, ResidualVector, SolutionFamily, UniquenessReport,
};
pub use strategy::{
    classify_preferences, from_t_params, make_chooser, make_cutter, permute_foods,
    symmetric_chooser, to_t_params, ChooserStrategy, CutterStrategy, FoodIndex, Permutation,
    PreferenceClass, PreferenceRelation, TParams, Verdict,
};
