use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live on different symplectic spaces")]
    SpaceMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("generators are not isotropic: beta({i}, {j}) = {value}")]
    NotIsotropic { i: usize, j: usize, value: String },
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("index {index:?} outside the faithfulness window {window:?}")]
    OutsideWindow { index: (i64, i64), window: (i64, i64) },
    #[error("generating function check failed: {0}")]
    InvalidGeneratingFunction(String),
    #[error("beta(y0, z0) = 0, the phase argument is vacuous")]
    VacuousPhaseIdentity,
    #[error("representation self-check failed: {0}")]
    Representation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
