use thiserror::Error;

/// Errors raised by every operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Dimensions of an input do not match the game it is used with.
    #[error("shape error: {0}")]
    Shape(String),

    /// A problem exceeds a hard size cap.
    #[error("capacity exceeded: {what} is {actual}, limit {limit}")]
    Capacity {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    /// An argument is outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A value violates a type invariant (field path + reason).
    #[error("invariant violated at `{path}`: {reason}")]
    Invariant { path: String, reason: String },

    #[error("no equilibrium supplied")]
    NoEquilibrium,

    #[error("ratio undefined: numerator {numerator} and denominator {denominator} are both non-positive")]
    UndefinedRatio { numerator: f64, denominator: f64 },

    /// The game object lacks an evaluator the operation needs.
    #[error("missing capability: {0}")]
    Capability(&'static str),

    #[error("game is not zero-sum (even after positive affine normalization)")]
    NotZeroSum,

    /// The linear-program kernel failed or produced an unverifiable answer.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("linear program is {0}")]
    LpStatus(&'static str),

    /// No point of the bargaining set dominates the status quo.
    #[error("no feasible point dominates the status quo")]
    Disagreement,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A precondition of an algorithm was not met before it started.
    #[error("contract violated: {0}")]
    Contract(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, actual: impl TryInto<u128>, limit: impl TryInto<u128>) -> Self {
        Error::Capacity {
            what,
            actual: actual.try_into().unwrap_or(u128::MAX),
            limit: limit.try_into().unwrap_or(u128::MAX),
        }
    }

    pub(crate) fn invariant(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invariant {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by malformed or out-of-range input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Shape(_)
                | Error::InvalidArgument(_)
                | Error::Invariant { .. }
                | Error::Parse(_)
                | Error::Contract(_)
                | Error::NotZeroSum
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
