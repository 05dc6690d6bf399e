use std::path::PathBuf;

use crate::reduced::FilamentConfiguration;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("filaments {i} and {j} collide at z = {z}")]
    Collision { i: usize, j: usize, z: f64 },

    #[error("point ({x}, {y}) is too close to the domain boundary")]
    NearBoundary { x: f64, y: f64 },

    #[error("coincident points {i} and {j}")]
    Coincident { i: usize, j: usize },

    #[error("grid resolution insufficient: {0}")]
    Resolution(String),

    #[error("minimizer did not converge after {iterations} iterations (gradient norm {grad_norm:.3e})")]
    MinimizerNotConverged {
        iterations: usize,
        grad_norm: f64,
        last: Box<FilamentConfiguration>,
    },

    #[error("{solver} did not converge: residual {residual:.3e} after {iterations} iterations")]
    SolverNotConverged {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("rejection sampling failed after {0} draws")]
    SamplingFailed(usize),

    #[error("malformed input {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for this error class: 2 solver, 3 resolution, 5 I/O,
    /// 1 for invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MinimizerNotConverged { .. } | Error::SolverNotConverged { .. } | Error::SamplingFailed(_) => 2,
            Error::Resolution(_) => 3,
            Error::Malformed { .. } | Error::Io(_) | Error::Json(_) | Error::Csv(_) => 5,
            _ => 1,
        }
    }
}
