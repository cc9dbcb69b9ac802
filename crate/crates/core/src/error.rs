use thiserror::Error;

pub type Result<T> = std::result::Result<T, OttoError>;

#[derive(Debug, Error)]
pub enum OttoError {
    /// A parameter record or argument failed validation.
    #[error("invalid {field}: {reason}")]
    Validation { field: &'static str, reason: String },

    /// Time argument outside the drive window.
    #[error("time {t} s outside drive window [0, {tau}] s")]
    Range { t: f64, tau: f64 },

    /// Step doubling hit its cap before the estimate settled.
    #[error(
        "propagator did not converge after {steps} steps: xi estimates {previous:.3e} -> {last:.3e}"
    )]
    NonConvergence {
        steps: usize,
        previous: f64,
        last: f64,
    },

    /// Efficiency requested outside the work-extraction regime.
    #[error("xi = {xi} is outside the engine regime (xi_max = {xi_max})")]
    OutOfRegime { xi: f64, xi_max: f64 },

    /// A closed form evaluated outside its domain of validity.
    #[error("{what} out of domain: {reason}")]
    OutOfDomain { what: &'static str, reason: String },

    #[error("{0}")]
    NotFound(String),

    /// A state or ledger broke one of its structural invariants.
    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl OttoError {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        OttoError::Validation {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(what: &'static str, reason: impl Into<String>) -> Self {
        OttoError::OutOfDomain {
            what,
            reason: reason.into(),
        }
    }
}
