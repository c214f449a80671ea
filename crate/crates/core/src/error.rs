use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid configuration, e.g. a precision below 53 bits.
    #[error("configuration error: {0}")]
    Config(String),

    /// A derivative oracle failed at a quadrature node.
    #[error("derivative oracle failed at x = {point} (order {order}): {reason}")]
    Oracle {
        point: String,
        order: u32,
        reason: String,
    },

    /// The real-line sum did not settle within the allowed window.
    #[error("truncation did not terminate: {0}")]
    Truncation(String),

    /// Exact elimination met a singular system.
    #[error("singular linear system: {0}")]
    Singular(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numeric_failure(&self) -> bool {
        matches!(self, Error::Truncation(_) | Error::Singular(_) | Error::Oracle { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
