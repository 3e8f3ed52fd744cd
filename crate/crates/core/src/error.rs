use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("deformation parameter q = {0} must lie in (0, 1)")]
    InvalidQ(f64),
    #[error("order nu = {0} must be greater than -1")]
    InvalidOrder(f64),
    #[error("grid window [{n_min}, {n_max}] is empty")]
    EmptyWindow { n_min: i32, n_max: i32 },
    #[error("expected {expected} values for the grid window, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value at grid index {0}")]
    NonFinite(i32),
    #[error("grid base q = {grid} does not match parameter q = {params}")]
    BaseMismatch { grid: f64, params: f64 },
    #[error("term tolerance {0} must lie in (0, 1e-6]")]
    InvalidTolerance(f64),
    #[error("argument {0} is not finite")]
    NonFiniteArgument(String),
    #[error("q-Bessel series did not converge within {terms} terms at z = {z}")]
    NonConvergence { z: String, terms: usize },
    #[error("exp(|z|) overflows at |z| = {0}")]
    Overflow(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
