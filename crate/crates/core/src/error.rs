use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("index ({i}, {j}) out of range for a {nx}x{ny} grid")]
    CellOutOfRange { i: usize, j: usize, nx: usize, ny: usize },

    #[error("linear index {index} out of range for {len} cells")]
    LinearIndexOutOfRange { index: usize, len: usize },

    #[error("triplet ({row}, {col}) out of range for dimension {n}")]
    TripletOutOfRange { row: usize, col: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("incomplete factorization broke down at row {row} (pivot {pivot:e})")]
    Breakdown { row: usize, pivot: f64 },

    #[error("sinh/cosh overflow at p = {value:e}")]
    Overflow { value: f64 },

    #[error("need at least {needed} residuals in the superlinear phase, got {got}")]
    InsufficientHistory { needed: usize, got: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }
}
