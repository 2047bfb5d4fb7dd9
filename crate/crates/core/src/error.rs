use thiserror::Error;

/// Errors raised by the exterior-calculus and port-Hamiltonian operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{op}: unsupported form degree {degree}")]
    Degree { op: &'static str, degree: usize },

    #[error("{op}: degrees {left} and {right} are incompatible")]
    DegreeMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },

    #[error("{op}: operands live on different grids")]
    GridMismatch { op: &'static str },

    #[error("{op}: density floor violated (min *mu = {min:e})")]
    Density { op: &'static str, min: f64 },

    #[error("{op}: expected {expected} representation")]
    Representation {
        op: &'static str,
        expected: &'static str,
    },

    #[error("{op}: length mismatch ({left} vs {right})")]
    LengthMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("watchdog tripped at step {step}: {reason}")]
    Watchdog { step: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
