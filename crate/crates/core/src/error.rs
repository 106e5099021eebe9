use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("support is not centrally symmetric: {point:?} present but its negation is missing")]
    NotCentrallySymmetric { point: Vec<i64> },

    #[error("empty input")]
    Empty,

    #[error("condition (*) violated: {0}")]
    ConditionStarViolated(String),

    #[error("unsupported dimension {0} (supported: 1..=3)")]
    UnsupportedDimension(usize),

    #[error("polytope is lower-dimensional (intrinsic dimension {intrinsic} < {ambient})")]
    DegeneratePolytope { intrinsic: usize, ambient: usize },

    #[error("matrix is not symmetric positive semidefinite: {0}")]
    NonPsdInput(String),

    #[error("BKK count is zero: the Newton polytopes are jointly degenerate")]
    ZeroBkk,

    #[error("leading Laurent coefficient vanishes")]
    LeadingCoefficientZero,

    #[error("degenerate (non-transversal) sample: {0}")]
    DegenerateSample(String),

    #[error("grid too coarse: counted {count} roots, BKK bound is {bound}")]
    GridTooCoarse { count: usize, bound: usize },

    #[error("too many degenerate samples: {resamples} resamples for {samples} samples")]
    ExcessiveDegeneracy { resamples: usize, samples: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
