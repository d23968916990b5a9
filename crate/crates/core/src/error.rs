use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain the operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),
    /// The coupling is in the wrong regime (e.g. no quasi-degenerate manifold for gamma <= 1/2).
    #[error("regime error: {0}")]
    Regime(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    /// A configured size bound for an exact (dense) computation was exceeded.
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("parameter mismatch: {0}")]
    ParamsMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
