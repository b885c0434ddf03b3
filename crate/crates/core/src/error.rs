use thiserror::Error;

/// Errors raised by problem evaluation, numerical kernels, solvers and the harness.
#[derive(Debug, Error)]
pub enum BenchError {
    /// A caller broke an operation's precondition (wrong dimension, point out of
    /// bounds, parameter outside its domain, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// An iterative scheme gave up before reaching its tolerance.
    #[error("no convergence: {reason} (best value {best}, estimated error {est_error:e})")]
    Convergence {
        reason: String,
        best: f64,
        est_error: f64,
    },

    /// Bad command-line or configuration input.
    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl BenchError {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        BenchError::Contract(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        BenchError::Usage(msg.into())
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
