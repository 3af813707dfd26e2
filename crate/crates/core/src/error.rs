use std::path::PathBuf;

use thiserror::Error;

use crate::channel::Regime;
use crate::polytope::PolytopeError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid channel: {0}")]
    Validation(String),

    #[error("channel is in the {regime} regime (user {index} has INR < SNR); strong-regime capacity does not apply")]
    NotStrongRegime { regime: Regime, index: usize },

    #[error("refusing: channel is in the {regime} regime; {reason}")]
    Refused { regime: Regime, reason: String },

    #[error("constraint kinds do not pair up: {0}")]
    KindMismatch(String),

    #[error("sweep produced no samples after regime filtering ({attempted} attempted)")]
    EmptySweep { attempted: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Polytope(#[from] PolytopeError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
