use thiserror::Error;

/// Errors raised by the models, the simulator and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The antenna configuration or parameter set does not satisfy the
    /// scheme's requirements.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// No exact outage expression exists for the requested scheme.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Monte Carlo bisection could not separate the bracket from the target
    /// outage within the trial budget.
    #[error("inconclusive Monte Carlo search, root in [{low:e}, {high:e}]: {reason}")]
    Inconclusive { low: f64, high: f64, reason: String },

    /// Invalid experiment configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical routine failed to converge or produced a non-finite value.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
