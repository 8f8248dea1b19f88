use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse {token:?}: {reason}")]
    Parse { token: String, reason: String },

    #[error("value out of range: {0}")]
    Range(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// The evaluated function returned a non-finite value.
    #[error("non-finite function value at point {point:?}")]
    Evaluation { point: Vec<f64> },

    /// Survival probability underflowed to zero, so the hazard is not representable.
    #[error("survival underflows to zero at t = {t}; hazard is not finite")]
    Overflow { t: f64 },

    #[error("insufficient data: need at least {required} observations, got {got}")]
    InsufficientData { required: usize, got: usize },

    #[error("degenerate sample: all observations are equal")]
    DegenerateSample,

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("contract violation: {0}")]
    Contract(String),

    /// A fit failed on one evaluated point of the indeterminacy space.
    #[error("at evaluated point #{index}: {source}")]
    AtPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// A dataset line failed to parse or validate.
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{failed} of {total} replications failed (limit is 1%); first failure: {first}")]
    TooManyFailures {
        failed: usize,
        total: usize,
        first: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Coarse classification used by front ends to choose an exit status.
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Parse { .. }
            | Error::Range(_)
            | Error::Domain(_)
            | Error::InsufficientData { .. }
            | Error::DegenerateSample
            | Error::Contract(_) => ErrorCategory::Data,
            Error::Config(_) => ErrorCategory::Usage,
            Error::Evaluation { .. }
            | Error::Overflow { .. }
            | Error::SolverFailure(_)
            | Error::TooManyFailures { .. } => ErrorCategory::Numerical,
            Error::AtPoint { source, .. } | Error::AtLine { source, .. } => source.category(),
        }
    }

    /// Strips [`Error::AtPoint`] and [`Error::AtLine`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } | Error::AtLine { source, .. } => source.root(),
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Usage,
    Data,
    Numerical,
}
