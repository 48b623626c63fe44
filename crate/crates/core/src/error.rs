//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("not a decimal number: {0:?}")]
    BadNumber(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("need n > p >= 1, got n = {n}, p = {p}")]
    TooFewPoints { n: usize, p: usize },

    #[error("points with indices {0:?} are affinely dependent")]
    AffinelyDependent(Vec<usize>),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("cloud is not in general position: points {0:?} lie on a common hyperplane")]
    NotInGeneralPosition(Vec<usize>),

    #[error("level kappa = {kappa} outside 1..={n}")]
    KappaOutOfRange { kappa: usize, n: usize },

    #[error("region is empty")]
    EmptyRegion,

    #[error("halfspace list is empty")]
    EmptyHalfspaces,

    #[error("residual of the anchor against the on-point span is zero; pick a different anchor")]
    ZeroResidual,

    #[error("perturbation failed to preserve the required sign pattern")]
    SignPreservationFailed,

    #[error("sample index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("oracle size limit exceeded: {0}")]
    OracleLimit(String),

    #[error("empty or inverted bounding box")]
    EmptyBoundingBox,

    #[error("unsupported dimension p = {0} for this generator")]
    UnsupportedDimension(usize),

    #[error("generator retry budget exhausted (seed {seed}); could not certify general position")]
    RetryBudgetExhausted { seed: u64 },

    #[error("csv row {row}: {msg}")]
    Csv { row: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),

    #[error("coordinate {0} is not representable as a finite decimal")]
    NotDecimal(String),

    #[error("search interval [{lo}, {hi}] is empty for n = {n}, p = {p}")]
    EmptySearchInterval { lo: usize, hi: usize, n: usize, p: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
