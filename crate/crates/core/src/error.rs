use thiserror::Error;

use crate::dsl::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("degree {needed} is beyond the computed cap {cap}")]
    CapExceeded { needed: usize, cap: usize },

    #[error("minimal order {r_min} is below the reduction order {k}")]
    OrderTooLow { r_min: usize, k: usize },

    #[error("covector must be nonzero")]
    ZeroCovector,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
