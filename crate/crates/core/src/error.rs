use thiserror::Error;

/// Errors produced by `greedy-core`.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least one coordinate")]
    EmptyVector,

    #[error("non-finite coordinate at position {position}")]
    NonFinite { position: usize },

    #[error("failed to parse {format} input: {message}")]
    Parse { format: &'static str, message: String },

    #[error("row {row} has {found} coordinates, expected {expected}")]
    InconsistentRow { row: usize, expected: usize, found: usize },

    #[error("atom {row} has norm below 1e-12 and cannot be normalized")]
    ZeroAtom { row: usize },

    #[error("dictionary has no atoms")]
    EmptyDictionary,

    #[error("invalid {name} = {value}: expected {expected}")]
    InvalidParameter {
        name: &'static str,
        value: String,
        expected: &'static str,
    },

    #[error("iteration {m} is outside the bound's regime m <= {max}")]
    BoundOutOfRegime { m: usize, max: usize },

    #[error("invariant {identity} violated at iteration {iteration}: lhs {lhs:e}, rhs {rhs:e}")]
    InvariantViolation {
        iteration: usize,
        identity: &'static str,
        lhs: f64,
        rhs: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(name: &'static str, value: impl ToString, expected: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value: value.to_string(),
            expected,
        }
    }
}
