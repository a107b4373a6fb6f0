use thiserror::Error;

/// Errors raised by the summation machinery.
///
/// Table builders never fail as a whole on a bad cell; they store the
/// error in the cell instead, which is why this type is `Clone`.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse number literal: unexpected `{token}`")]
    Parse { token: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("degenerate denominator at n={n}, m={m}")]
    Degenerate { n: usize, m: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Usage(String),

    /// Help or version text requested on the command line.
    #[error("{0}")]
    Help(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    /// Short machine-readable tag, used for the `flag` field of reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Domain(_) => "domain",
            Error::Shape(_) => "shape",
            Error::Degenerate { .. } => "degenerate",
            Error::Unsupported(_) => "unsupported",
            Error::Usage(_) | Error::Help(_) => "usage",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
