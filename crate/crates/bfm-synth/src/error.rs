use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("singular value decomposition failed: {0}")]
    SvdFailure(String),

    #[error(transparent)]
    Codec(#[from] bfm_codec::CodecError),

    #[error(transparent)]
    Capture(#[from] bfm_capture::CaptureError),
}
