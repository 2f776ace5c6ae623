use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("genus mismatch: expected {expected}, found {found}")]
    GenusMismatch { expected: usize, found: usize },

    #[error("genus {genus} is over the enumeration bound {bound}")]
    EnumerationBound { genus: usize, bound: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid period matrix: {0}")]
    InvalidPeriodMatrix(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("AGM did not converge within {iterations} iterations")]
    AgmNonConvergence { iterations: usize },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("malformed divisor: {0}")]
    MalformedDivisor(String),

    #[error("point is not on the curve")]
    NotOnCurve,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("data corruption: {0}")]
    DataCorruption(String),

    #[error("resampling cap of {attempts} attempts exceeded")]
    ResampleCapExceeded { attempts: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::GenusMismatch { .. } => "genus_mismatch",
            Error::EnumerationBound { .. } => "enumeration_bound",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidPeriodMatrix(_) => "invalid_period_matrix",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Degenerate(_) => "degenerate",
            Error::AgmNonConvergence { .. } => "agm_non_convergence",
            Error::InvalidCurve(_) => "invalid_curve",
            Error::MalformedDivisor(_) => "malformed_divisor",
            Error::NotOnCurve => "not_on_curve",
            Error::Precondition(_) => "precondition",
            Error::DataCorruption(_) => "data_corruption",
            Error::ResampleCapExceeded { .. } => "resample_cap_exceeded",
            Error::Parse(_) => "parse",
        }
    }
}
