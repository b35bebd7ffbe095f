use thiserror::Error;

#[derive(Debug, Error)]
pub enum CaptureError {
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("fixture parse error at line {line}: {message}")]
    FixtureParse { line: usize, message: String },

    #[error("not a pcap file: {message}")]
    PcapHeader { message: String },

    #[error("no decodable feedback frames ({skipped} packets skipped: {reasons})")]
    EmptyCapture { skipped: usize, reasons: String },

    #[error("report too short: {bits} bits, one subcarrier needs {needed}")]
    TruncatedReport { bits: usize, needed: usize },

    #[error("record has {actual} angle sets but claims {expected} subcarriers")]
    SubcarrierCountMismatch { expected: usize, actual: usize },

    #[error("angle set {index} has mismatched dimensions or config")]
    InhomogeneousRecord { index: usize },

    #[error(
        "quantization config ({b_phi},{b_psi}) is not a codebook preset; pcap output needs one"
    )]
    NonPresetConfig { b_phi: u8, b_psi: u8 },

    #[error(transparent)]
    Codec(#[from] bfm_codec::CodecError),
}

impl CaptureError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CaptureError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
