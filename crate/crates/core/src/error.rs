//! Error taxonomy shared by all modules. The CLI maps these onto exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent configuration; `pointer` is a JSON pointer
    /// to the offending field.
    #[error("config error at {pointer}: {msg}")]
    Config { pointer: String, msg: String },

    /// A geometric hypothesis of the construction failed (strip does not
    /// join its curves, the gamma-curve misses the last hole, ...).
    #[error("geometry assertion failed: {0}")]
    Geometry(String),

    /// Numerical failure: quadrature non-convergence, singular system,
    /// nonlinear iteration divergence.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A precondition on the data failed (nonzero residual flux, nonzero
    /// mean source, non-solenoidal input field).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(pointer: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            pointer: pointer.into(),
            msg: msg.into(),
        }
    }

    /// Process exit code used by the CLI: 2 config, 3 numeric, 4 geometry/hypothesis.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            Error::Numeric(_) | Error::Io(_) | Error::Json(_) => 3,
            Error::Geometry(_) | Error::Hypothesis(_) => 4,
        }
    }
}
