use crate::specfun::SpecFunError;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter {field}: {reason}")]
    InvalidParameter { field: &'static str, reason: String },
    #[error("{0}")]
    Numerical(#[from] SpecFunError),
    #[error("model assumption violated: {0}")]
    Assumption(String),
    #[error("degenerate topology: {0}")]
    DegenerateTopology(String),
    #[error("{0}")]
    Config(#[from] crate::config::ConfigError),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { field, reason: reason.into() }
}
