use thiserror::Error;

/// Errors raised by constructors and evaluators.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {value} is outside the open interval (0, 1)")]
    InvalidProbability { value: f64 },

    #[error("non-finite input: {what}")]
    NonFinite { what: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("covariance matrix is not symmetric (|S[{row}][{col}] - S[{col}][{row}]| = {gap})")]
    NotSymmetric { row: usize, col: usize, gap: f64 },

    #[error("covariance matrix is not positive definite (pivot {pivot} = {value})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("research cost C({j}) = {value} is infeasible: {reason}")]
    InvalidCost { j: usize, value: f64, reason: &'static str },

    #[error("no solution for p*: C/gamma = {target} must lie in the open interval ({lower}, {upper})")]
    InfeasiblePStar { target: f64, lower: f64, upper: f64 },

    #[error("weights sum to {sum}, expected 1")]
    WeightsDoNotSumToOne { sum: f64 },

    #[error("index variance w'Sw = {value} is not positive")]
    ZeroIndexVariance { value: f64 },

    #[error("factor loading {index} = {value} is not positive")]
    NonPositiveLoading { index: usize, value: f64 },

    #[error("no units in the {arm} arm; the treatment design is rank deficient")]
    RankDeficient { arm: &'static str },

    #[error("exhaustive enumeration over {j} items exceeds the limit of {max}")]
    EnumerationTooLarge { j: usize, max: usize },

    #[error("{0} has no closed form here; supply a Monte Carlo configuration")]
    NeedsSimulation(&'static str),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no candidate rule passed the maximin check")]
    EmptyFeasibleSet,

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
