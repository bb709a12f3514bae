use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed scenario document. `line` is 1-based; 0 when the document is JSON
    /// and serde did not report a position.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("missing required field `{0}`")]
    MissingField(&'static str),

    #[error("invalid value for `{field}`: {reason}")]
    InvalidValue { field: String, reason: String },

    /// A documented precondition or invariant does not hold.
    #[error("{0}")]
    Domain(String),

    #[error("fading family {0} is not supported here")]
    UnsupportedFading(String),

    #[error("Monte-Carlo check needs at least {required} trials, got {got}")]
    InsufficientTrials { required: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidValue {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
