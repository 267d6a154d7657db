use thiserror::Error;

/// Everything that can go wrong across the analytic and simulation layers.
/// Numeric contract violations are rejected eagerly at construction or on
/// entry to an operation, never silently clamped.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("probability must lie in [0, 1], got {0}")]
    ProbabilityRange(f64),

    #[error("quantile needs p strictly inside (0, 1), got {0}")]
    QuantileDomain(f64),

    #[error("{what} must satisfy {constraint}, got {value}")]
    OutOfRange {
        what: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error("sample size must be at least 2, got {0}")]
    SampleTooSmall(u64),

    #[error("response and design vectors differ in length: {lhs} vs {rhs}")]
    LengthMismatch { lhs: usize, rhs: usize },

    #[error("design vector has no mass: sum of squares is zero")]
    DegenerateDesign,

    #[error("replicate count must lie in 1..={max}, got {got}")]
    ReplicateBudget { got: u64, max: u64 },

    #[error("beta grid is empty")]
    EmptyGrid,

    #[error("series needs at least 3 entries to classify, got {0}")]
    SeriesTooShort(usize),

    #[error(
        "confusion margin is undefined for the {family} family: \
         its drift is not tied to the selector threshold"
    )]
    MarginNotApplicable { family: &'static str },

    #[error("cannot classify separation: {reason}")]
    Unclassifiable { reason: String },

    #[error(
        "n grid needs at least 3 points for a sweep, got {got}; \
         widen it via min:max:points-per-decade"
    )]
    GridTooSmall { got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o failure on {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
