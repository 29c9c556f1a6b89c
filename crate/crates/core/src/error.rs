use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gaussian is not normalizable: Re(c2) = {re_c2} must be negative")]
    NonNormalizable { re_c2: f64 },

    #[error("tolerance {tol:e} not met (estimated error {estimate:e})")]
    ToleranceNotMet { tol: f64, estimate: f64 },

    #[error("series did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("intermediate value left the representable range: {0}")]
    OverflowGuard(String),

    #[error("coordinate {coordinate} lies outside the validated window |u| <= {limit} for dimension {dim}")]
    WindowExceeded { coordinate: f64, limit: f64, dim: usize },

    #[error("truncation at N = {dim} leaks an estimated norm of {leaked:e}")]
    TruncationWarning { dim: usize, leaked: f64 },

    #[error("Weyl form requires [A,[A,B]] = [B,[A,B]] = 0; largest double commutator entry is {residual:e}")]
    HypothesisViolated { residual: f64 },

    #[error("factorization is singular: 1 - s*z = 0 for z = {z}")]
    SingularFactorization { z: num_complex::Complex64 },
}

pub type Result<T> = std::result::Result<T, Error>;
