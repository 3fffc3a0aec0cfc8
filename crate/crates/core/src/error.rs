//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not Hermitian (residual {residual})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not normal (residual {residual})")]
    NotNormal { residual: f64 },

    #[error("iteration failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("matrix does not define a conjugation: {0}")]
    InvalidConjugation(String),

    #[error("matrix is not unitary (residual {residual})")]
    NotUnitary { residual: f64 },

    #[error("operator does not have numerical rank one (rank {rank})")]
    NotRankOne { rank: usize },

    #[error("dimension {dim} is too small: {reason}")]
    DimensionTooSmall { dim: usize, reason: String },

    #[error("matrix is not conjugate-normal (residual {residual})")]
    NotConjugateNormal { residual: f64 },

    #[error("operator is not C-normal (residual {residual})")]
    NotCNormal { residual: f64 },

    #[error("canonical decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("eta is not unimodular (|eta| = {modulus})")]
    EtaNotUnimodular { modulus: f64 },

    #[error("section of size {size} is too small, need at least {needed}")]
    SectionTooSmall { size: usize, needed: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("density is unbounded: {0}")]
    UnboundedDensity(String),

    #[error("operation leaks outside the window: {0}")]
    BoundaryLeak(String),

    #[error("map is not a measure-preserving involution: {0}")]
    InvalidInvolution(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
