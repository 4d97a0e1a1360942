use thiserror::Error;

/// Errors shared by every layer. The CLI maps them to exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(i64, i64),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("morphism is not well defined: {0}")]
    IllDefined(String),
    #[error("expected a monomorphism: {0}")]
    NotMono(String),
    #[error("{what} exceeds cap {cap} (size {size})")]
    Cap { what: String, cap: u128, size: u128 },
    #[error("step limit {0} reached before stabilizing")]
    MaxSteps(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A theorem-backed implication failed at runtime.
    #[error("property violated: {0}")]
    Violation(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Cap { .. } | Error::MaxSteps(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
