use thiserror::Error;

/// Errors raised by the lattice model, the analytic solutions and the integrator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} sites, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("negative occupation {value} at site {site}")]
    NegativeOccupation { site: usize, value: f64 },

    #[error("site index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("wrong regime: {0}")]
    Regime(String),

    #[error("non-finite amplitude produced at t = {time}")]
    NonFinite { time: f64 },

    #[error("phase undefined at site {site}: occupation is zero")]
    UndefinedPhase { site: usize },

    #[error("fit failed: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
