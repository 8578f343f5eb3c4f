use thiserror::Error;

/// Errors raised by the solvers, polynomial tools and region analysis.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested enumeration is larger than the configured cap.
    #[error("capacity exceeded: {what} = {value} is above the cap {cap}")]
    Capacity {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("no sign change of the polynomial on [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },

    /// A theorem's hypothesis does not hold, so its conclusion is not checked.
    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(String),

    #[error("improvement not guaranteed: {0}")]
    ImprovementNotGuaranteed(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
