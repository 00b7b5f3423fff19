//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by body construction, enumeration, and the experiment
/// drivers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is numerically singular (|det| = {det:.3e} <= {tol:.1e})")]
    SingularMatrix { det: f64, tol: f64 },

    #[error("rotation amplitude {eps} outside [0, 2)")]
    EpsilonOutOfRange { eps: f64 },

    #[error("candidate budget exceeded: {candidates} integer points > budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u64 },

    #[error("boundary-ambiguous lattice point {point:?} prevents a verdict (tau = {tau:.1e})")]
    AmbiguousBoundary { point: Vec<i64>, tau: f64 },

    #[error("perturbation too large for the sandwich bounds: eps = {eps}, eps' = {eps_prime}")]
    PerturbationTooLarge { eps: f64, eps_prime: f64 },

    #[error("p = {p} lies within the {margin:.1e} relative exclusion window of the threshold {threshold}")]
    ThresholdMargin { p: f64, threshold: f64, margin: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
