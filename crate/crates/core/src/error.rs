use alloc::string::String;

/// Errors raised by the control library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A dual vector that is identically zero was given where a direction is required.
    #[error("degenerate dual: (Phi, phi) is identically zero")]
    DegenerateDual,
    /// A root search could not bracket its target.
    #[error("bracketing failed: {0}")]
    Bracketing(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
