use thiserror::Error;

/// Errors raised by learners, metrics and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The online protocol was broken (e.g. an action outside the domain).
    #[error("protocol violation: {0}")]
    Protocol(String),

    /// A NaN or infinity showed up where a finite value is required.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// An internal bookkeeping invariant failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    /// The requested metric needs data the trace does not carry.
    #[error("unsupported metric: {0}")]
    UnsupportedMetric(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed trace (line {line}): {message}")]
    Trace { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}
