//! Best proximity points of p-proximal contractions on finite metric spaces.
//!
//! The pipeline for an instance `T: A -> B`:
//!
//! 1. [`proximal::proximal_sets`] computes `d(A, B)`, `A0` and `B0`.
//! 2. [`analysis::p_proximal_constant`] certifies the smallest p-proximal
//!    constant `k` by exhaustive enumeration.
//! 3. [`proximal::induced_map`] builds the self-map `S` of `A0` sending `x`
//!    to the unique `u` with `d(u, T x) = d(A, B)`. Its Lipschitz constant is
//!    at most `2k/(1-k)`, which is below one when `k < 1/3`.
//! 4. [`solver::picard_solve`] iterates `S` to its fixed point, which is the
//!    unique best proximity point of `T`; [`solver::best_proximity_oracle`]
//!    confirms it by brute force.

pub mod analysis;
pub mod error;
pub mod fixtures;
pub mod hunt;
pub mod instance;
pub mod json;
pub mod metric;
pub mod proximal;
pub mod report;
pub mod solver;

pub use analysis::{
    induced_bound, lipschitz_constant, p_contraction_constant, p_proximal_constant,
    AdmissibilityReport, Classification, LipschitzReport,
};
pub use error::{Error, Result};
pub use metric::{euclidean_embed, metric_repair, random_metric, validate_metric, FiniteMetricSpace};
pub use proximal::{
    check_preconditions, induced_map, pair_distance, proximal_preimages, proximal_sets,
    InducedMap, PairInstance, PreconditionReport, ProximalStructure,
};
pub use solver::{
    apriori_error_bound, best_proximity_oracle, picard_solve, verify_best_proximity,
    OracleResult, PicardOptions, SolveResult,
};
