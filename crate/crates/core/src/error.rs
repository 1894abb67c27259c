use thiserror::Error;

use crate::clifford::Signature;

/// Errors raised by the algebra, operator assembly, and suite layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature ({p},{q}): {reason}")]
    InvalidSignature { p: usize, q: usize, reason: &'static str },

    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(Signature, Signature),

    #[error("operand is not parity-homogeneous")]
    Inhomogeneous,

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("declared parity violated: block leak {0:e}")]
    ParityViolation(f64),

    #[error("matrix is not symmetric (defect {0:e})")]
    NotSymmetric(f64),

    #[error("eigensolve failed to converge on a {0}x{0} matrix")]
    Eigensolve(usize),

    #[error("ambiguous eigenvalue clustering near {0}")]
    ClusterAmbiguity(f64),

    #[error("no witness found for {source_sig} inside {target_sig}")]
    NoWitness {
        source_sig: Signature,
        target_sig: Signature,
    },

    #[error("quadrature produced a non-finite matrix element")]
    Quadrature,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("report schema violation: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
