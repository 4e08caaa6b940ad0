use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or configuration field failed validation.
    #[error("{field} {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("fixed-point iteration for k0 did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A sideband with `1 + l·v <= 0` would need an imaginary wavevector.
    #[error("sideband l = {l} is evanescent (1 + l·v = {value:e})")]
    EvanescentSideband { l: i64, value: f64 },

    #[error("return {r} lies outside the well [-{half_width}, {half_width}]")]
    OutsideWell { r: f64, half_width: f64 },

    #[error("invalid interval [{a}, {b}]: {reason}")]
    InvalidInterval { a: f64, b: f64, reason: String },

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("non-finite state at step {step} (t = {t})")]
    Diverged { step: usize, t: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
