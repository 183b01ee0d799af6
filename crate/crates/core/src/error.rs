use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("shape mismatch: expected {expected:?}, got {actual:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("spectrum is not Hermitian: relative imaginary residue {residue:e} exceeds {tolerance:e}")]
    NonHermitian { residue: f64, tolerance: f64 },

    #[error("invalid frame specification: {0}")]
    InvalidFrameSpec(String),

    #[error("frame partition violated: {0}")]
    FramePartition(String),

    #[error("coefficient set does not belong to this representation: {0}")]
    CoefficientMismatch(String),

    #[error("invalid filter: {0}")]
    InvalidFilter(String),

    #[error("grid {nx}x{nt} is not divisible by 2^{levels}")]
    LevelDivisibility { nx: usize, nt: usize, levels: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Format(String),

    #[error("truncated file {path}: expected {expected} bytes, found {actual}")]
    Truncated {
        path: PathBuf,
        expected: u64,
        actual: u64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
