use thiserror::Error;

/// Errors produced by the distribution, fitting and compound-model routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error in {function}: {reason}")]
    Domain { function: &'static str, reason: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{function} overflowed f64; use the log-scaled variant (log value {log_value})")]
    Overflow { function: &'static str, log_value: f64 },

    #[error("{function} did not converge within {iterations} iterations")]
    NoConvergence { function: &'static str, iterations: usize },

    #[error("survival probability underflowed to zero at t = {t}")]
    Degenerate { t: u64 },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("{0} is not supported")]
    Unsupported(String),

    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error("line {line}: negative frequency {value}")]
    NegativeFrequency { line: u64, value: i64 },

    #[error("duplicate count value {count}")]
    DuplicateCount { count: u64 },

    #[error("dataset has no observations")]
    EmptyDataset,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            function,
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
