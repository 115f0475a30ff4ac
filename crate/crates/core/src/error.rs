use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("subsystem index {index} out of range for {len} subsystems")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("total dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("invalid subsystem shape: {0}")]
    InvalidShape(String),

    #[error("normalization violated: {0}")]
    Normalization(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("matrix is not an isometry (max |V^dag V - I| = {deviation:e})")]
    NotIsometry { deviation: f64 },

    #[error("unsupported subsystem shape {found:?}, expected {expected}")]
    WrongShape { expected: &'static str, found: Vec<usize> },

    #[error("alpha = {alpha} outside the admissible range: {reason}")]
    AlphaOutOfRange { alpha: f64, reason: String },

    #[error("weighting scheme mismatch: {0}")]
    SchemeMismatch(String),

    #[error("unknown catalog state {0:?}")]
    UnknownCatalogState(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
