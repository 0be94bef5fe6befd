use thiserror::Error;

/// Errors raised by the engine.
///
/// Every variant maps to a stable machine-readable reason string so batch
/// callers can branch on the failure class without parsing messages.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LvarError {
    /// Objects that must share a finite space do not, or an index is out of range.
    #[error("structural error: {0}")]
    Structural(String),
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of the operation does not hold, or two
    /// independent evaluation routes disagree.
    #[error("contract error: {0}")]
    Contract(String),
    /// An iterative kernel did not reach its tolerance.
    #[error("numeric error: {message} (residual {residual:e})")]
    Numeric { message: String, residual: f64 },
}

impl LvarError {
    pub fn reason(&self) -> &'static str {
        match self {
            LvarError::Structural(_) => "structural",
            LvarError::Domain(_) => "domain",
            LvarError::Contract(_) => "contract",
            LvarError::Numeric { .. } => "numeric",
        }
    }
}

pub type Result<T> = std::result::Result<T, LvarError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(LvarError::Domain(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(LvarError::Contract(msg.into()))
}

pub(crate) fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(LvarError::Structural(msg.into()))
}
