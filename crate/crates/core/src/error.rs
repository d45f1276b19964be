use std::fmt;

/// Errors produced by state construction, kernels, measures and experiments.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the input was violated (dimensions, ranges, basis
    /// orthonormality, malformed configuration, ...).
    InvalidInput(String),
    /// An eigenvalue computation produced values outside the tolerated
    /// round-off window, which signals an invalid density matrix or a
    /// non-converging solve.
    NumericalDegeneracy(String),
    /// Not enough usable data points for a fit or a statistic.
    InsufficientData(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NumericalDegeneracy(msg) => write!(f, "numerical degeneracy: {msg}"),
            Error::InsufficientData(msg) => write!(f, "insufficient data: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
