use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeExceedsCap { degree: usize, cap: usize },

    #[error("operators act on different bases")]
    BasisMismatch,

    #[error("grid too coarse: flux per plaquette {flux:.4} exceeds {limit}; use N >= {required_n}")]
    Resolution {
        flux: f64,
        limit: f64,
        required_n: usize,
    },

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("spectrum does not cover level {level}: highest computed value {highest:.4} (need > {needed:.4})")]
    IncompleteCoverage {
        level: usize,
        highest: f64,
        needed: f64,
    },

    #[error("spectral gap {gap:.3e} around 1/2 is below {min_gap:.1e}")]
    GapTooSmall { gap: f64, min_gap: f64 },

    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    #[error("outside the Landau regime: {0}")]
    OutsideLandauRegime(String),

    #[error("{0}")]
    NotPeriodic(String),

    #[error("odd number of vector fields ({0})")]
    OddFieldCount(usize),

    #[error("support leaves the chart: {0}")]
    ChartExceeded(String),

    #[error("non-positive value {value} at k = {k}")]
    NonPositive { k: f64, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
