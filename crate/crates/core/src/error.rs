use alloc::string::String;

/// Failures shared by every geometry routine in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("the intersection is empty")]
    EmptyBody,
    #[error("degenerate body: {0}")]
    DegenerateBody(String),
    #[error("the intersection is not compact")]
    NonCompact,
    #[error("broken facet boundary: {0}")]
    Topology(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn degenerate(msg: impl Into<String>) -> Error {
    Error::DegenerateBody(msg.into())
}
