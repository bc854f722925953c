use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scenario or parameter violates one of its invariants.
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    /// A model function was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("quadrature on [{lo}, {hi}] did not reach relative tolerance {tolerance:e}")]
    Quadrature { lo: f64, hi: f64, tolerance: f64 },
    /// No detections at all, so ratios such as the QBER are undefined.
    #[error("degenerate link: {0}")]
    DegenerateLink(&'static str),
    #[error("day-time uplink unsupported")]
    DayUplinkUnsupported,
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by bad input (as opposed to I/O failures).
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
