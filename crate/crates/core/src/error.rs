use num_bigint::BigUint;
use thiserror::Error;

use crate::matroid::Violation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("ground set has {0} elements; at most {max} are supported", max = crate::matroid::MAX_GROUND)]
    GroundTooLarge(usize),

    #[error("table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },

    #[error("not a matroid: {0}")]
    NotAMatroid(Violation),

    #[error("matroid is not essential (M(E) has free rank {0}); essentialize it first")]
    NotEssential(usize),

    #[error("{0} is not prime")]
    NotPrime(BigUint),

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(BigUint),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("generator lengths must be positive")]
    ZeroLength,

    #[error("oracle bound exceeded: {0}")]
    OracleBound(String),

    #[error("oracle requires finite groups (free rank 0)")]
    OracleNeedsTorsion,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
