use thiserror::Error;

use crate::linalg::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vectors are linearly dependent")]
    DependentVectors,

    #[error("vector with squared norm {norm_sq} exceeds bound {bound_sq}")]
    ExceedsBound { norm_sq: Box<Scalar>, bound_sq: Box<Scalar> },

    #[error("expected integer coordinates")]
    NonIntegral,

    #[error("generating set is empty")]
    EmptyInput,

    #[error("generating set is not flagged complete")]
    Incomplete,

    #[error("vectors are not in nondecreasing norm order")]
    NotNormOrdered,

    #[error("{0} must be positive")]
    NonPositive(&'static str),

    #[error("Lovász parameter {0} outside (1/4, 1]")]
    InvalidDelta(Box<Scalar>),

    #[error("enumeration exceeded the cap of {cap} vectors")]
    CapExceeded { cap: usize },

    #[error("oracle limits exceeded: {0}")]
    OracleTooLarge(String),

    #[error("rank mismatch: basis has rank {basis}, result has rank {result}")]
    RankMismatch { basis: usize, result: usize },
}

pub type Result<T, E = LatticeError> = std::result::Result<T, E>;
