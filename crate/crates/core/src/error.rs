use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, found {found})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: String,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("ancilla outcome {outcome} has zero probability and cannot be post-selected")]
    Unpostselectable { outcome: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("confusion matrix for qubit {qubit} is singular (e0 + e1 = 1)")]
    SingularConfusion { qubit: usize },
    #[error("missing tomography setting {0}")]
    MissingSetting(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("QASM parse error on line {line}: {message}")]
    Qasm { line: usize, message: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit_interval(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || value.is_nan() {
        return Err(Error::InvalidParameter {
            name: name.to_string(),
            value,
            reason: "must lie in [0, 1]",
        });
    }
    Ok(())
}
