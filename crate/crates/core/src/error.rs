use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    /// A density left the open interval `(δ, 1 − δ)`, so the underlying
    /// map is no longer expanding.
    #[error("domain violation: {what} = {value:e} at node {index}")]
    Domain {
        what: &'static str,
        value: f64,
        index: usize,
    },

    /// The integrator produced a NaN or infinity.
    #[error("non-finite state produced at step {step}")]
    Step { step: usize },

    /// Malformed input (wrong lengths, grid not divisible by the degree, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, FlowError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(FlowError::Invalid(msg.into()))
}
