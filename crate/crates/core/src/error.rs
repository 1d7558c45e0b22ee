use thiserror::Error;

use crate::disentangle::DisentanglingVerdict;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid partition: {0}")]
    Partition(String),

    #[error(
        "matrix is not Hermitian (relative deviation {deviation:.3e} exceeds {tolerance:.1e})"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("state does not factorize: gap {:.3e} exceeds tolerance {:.1e}", .0.gap, .0.tolerance)]
    NotFactorizable(Box<DisentanglingVerdict>),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("unknown state name `{0}`")]
    UnknownState(String),

    #[error("eigensolver did not converge on a {0}x{0} matrix")]
    NoConvergence(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
