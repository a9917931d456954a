use thiserror::Error;

/// Errors raised by state-space, spectral, divergence and Jordan-algebra operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid state-space descriptor: {0}")]
    InvalidSpace(String),

    #[error("point is not in the state space (violation {violation:e})")]
    NotInSpace { violation: f64 },

    #[error("negative trace weight {0}")]
    NegativeTrace(f64),

    #[error("weights must be nonnegative and sum to 1 (sum = {0})")]
    InvalidWeights(f64),

    #[error("inputs belong to different state spaces")]
    MixedSpaces,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("operation not supported for {space}: {op}")]
    Unsupported { space: String, op: &'static str },

    #[error("the cone apex has no {0}")]
    Apex(&'static str),

    #[error("no orthogonal decomposition found for a point of the space")]
    NoDecomposition,

    #[error("support bound {requested} exceeds the {available} available vertices")]
    SupportBound { requested: usize, available: usize },

    #[error("polytope has {0} vertices; enumeration is limited to 12")]
    TooManyVertices(usize),

    #[error("spectra have different totals: {0} vs {1}")]
    UnequalTotals(f64, f64),

    #[error("state space is not spectral")]
    NotSpectral,

    #[error("state space is not two-dimensional (dimension {0})")]
    NotTwoDimensional(usize),

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("entry does not belong to the {0} ring")]
    RingViolation(&'static str),

    #[error("eigenvalue {value} outside the domain of {function}")]
    Domain { function: String, value: f64 },

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("gradient undefined at the given state: {0}")]
    GradientUndefined(String),

    #[error("no action in the set is optimal for the given state")]
    NoOptimalAction,

    #[error("divergence is infinite where a finite value is required")]
    InfiniteDivergence,

    #[error("locality precondition failed (max gap {0:e})")]
    LocalityPrecondition(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
