//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A measure violated a structural invariant (duplicate supports, zero
    /// amplitude, mismatched lengths, empty support set).
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// A sampling grid violated a structural invariant.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// An argument left the domain an operation is defined on.
    #[error("domain error: {0}")]
    DomainError(String),

    /// The neighborhood radius makes the per-support intervals overlap.
    #[error("overlapping intervals: 2*delta = {two_delta} >= d_min = {d_min}")]
    OverlappingIntervals { two_delta: f64, d_min: f64 },

    /// Fewer than two supports, or a zero noise level, where a separation or
    /// SNR is required.
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),

    /// A Gram determinant fell below the scale-relative singularity threshold.
    #[error("rank-deficient matrix: {0}")]
    RankDeficient(String),

    /// Two nodes coincide within tolerance, so the linear system is singular.
    #[error("singular matrix: nodes coincide within tolerance")]
    SingularMatrix,

    /// Interpolation nodes coincide within tolerance.
    #[error("duplicate nodes within tolerance")]
    DuplicateNodes,

    /// The requested exhaustive search exceeds the configured budget.
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A checker's stated hypotheses do not hold on the given input; this is
    /// distinct from the checked inequality failing.
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),

    /// The measurement has too few samples for the requested matrix size.
    #[error("too few samples: m = {m}, need at least {needed}")]
    TooFewSamples { m: usize, needed: usize },

    /// The SVD iteration did not converge within its sweep budget.
    #[error("SVD iteration failed to converge")]
    ConvergenceFailure,

    /// A support lies outside the admissible cluster interval.
    #[error("support {support} outside interval [-{half_width}, {half_width}]")]
    SupportsOutsideInterval { support: f64, half_width: f64 },

    /// The computed null vector has a near-zero entry, indicating numerically
    /// coincident nodes.
    #[error("degenerate nodes: null-vector entry below tolerance")]
    DegenerateNodes,

    /// A constructed instance failed its defining verification.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    /// A data set lacks the classes a fit requires.
    #[error("degenerate data: {0}")]
    DegenerateData(String),

    /// An experiment configuration is unusable.
    #[error("config error: {0}")]
    ConfigError(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
