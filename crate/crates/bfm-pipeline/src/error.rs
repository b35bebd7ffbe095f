use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("degenerate input: total variance is zero (constant features)")]
    DegenerateInput,

    #[error("timestamps not strictly increasing at index {index}")]
    NonMonotonicTimestamps { index: usize },

    #[error("estimate/truth alignment: {0}")]
    AlignmentMismatch(String),

    #[error("capture stream holds no records")]
    EmptyStream,

    #[error("eigensolver failed to converge")]
    EigenNoConvergence,
}
