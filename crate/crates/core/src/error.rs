use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("a frame needs at least one vector")]
    EmptyFrame,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("theta is the zero operator; the lower frame bound is vacuous")]
    ZeroTheta,
    #[error("outer index counts differ ({left} vs {right})")]
    OuterCountMismatch { left: usize, right: usize },
    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientDimMismatch { left: usize, right: usize },
    #[error(
        "inner index sets differ at j={outer} ({left} vs {right} elements); \
         element-wise weaving needs identical inner index sets"
    )]
    InnerIndexMismatch {
        /// 1-based outer index.
        outer: usize,
        left: usize,
        right: usize,
    },
    #[error("2^{bits} selections exceed the enumeration cap of {cap}; use sampling (--sample N)")]
    EnumerationCapExceeded { bits: usize, cap: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of the numerical machinery itself rather than of the
    /// caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Linalg(
                LinalgError::NoConvergence { .. }
                    | LinalgError::NotPsd { .. }
                    | LinalgError::NotHermitian { .. }
            )
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
