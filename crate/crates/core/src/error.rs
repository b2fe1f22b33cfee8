use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("operation requires p >= {min}, got p = {p}")]
    PrimeTooSmall { p: u64, min: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no consistent extension of the angle functions at {point} (coordinate {coord} vanishes)")]
    NoConsistentExtension { coord: usize, point: String },

    #[error("resource limit: p = {p} exceeds the configured cap of {cap}")]
    ResourceLimit { p: u64, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
