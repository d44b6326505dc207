use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("number of qubits must be even and at least 2, got {0}")]
    InvalidQubitCount(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("basis mismatch: expected {expected:?} basis, got {found:?}")]
    BasisMismatch {
        expected: crate::dicke::Axis,
        found: crate::dicke::Axis,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("parity is only conserved for a vanishing longitudinal field (h_z = {0})")]
    ParityBroken(f64),

    #[error(
        "propagation did not converge: {steps} steps per segment still changed populations by {change:e} (tolerance {tolerance:e})"
    )]
    NonConvergence {
        steps: usize,
        change: f64,
        tolerance: f64,
    },

    #[error("tridiagonal eigensolver failed to converge")]
    EigenSolver,

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("unknown axis `{0}`")]
    UnknownAxis(String),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
