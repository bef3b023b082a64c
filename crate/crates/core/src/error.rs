use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Vector/matrix shapes do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A parameter is outside its valid range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A numeric quantity became NaN or infinite where it must not.
    #[error("non-finite value: {0}")]
    NonFinite(String),

    /// The planner could not produce a usable batch (all or most rollouts diverged).
    #[error("planner degeneracy: {0}")]
    PlannerDegenerate(String),

    /// Replay sampling was requested from empty storage.
    #[error("empty buffer: {0}")]
    EmptyBuffer(String),

    /// Run configuration failed validation.
    #[error("config error: {0}")]
    Config(String),

    /// A checkpoint or data file is malformed.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
