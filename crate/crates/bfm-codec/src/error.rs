use thiserror::Error;

/// Which of the two angle families an index belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleKind {
    Phi,
    Psi,
}

impl std::fmt::Display for AngleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AngleKind::Phi => write!(f, "phi"),
            AngleKind::Psi => write!(f, "psi"),
        }
    }
}

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("bit width must be at least 1, got b_phi={b_phi}, b_psi={b_psi}")]
    InvalidBitWidth { b_phi: u8, b_psi: u8 },

    #[error("unsupported dimensions: {n_rows} rows x {n_cols} cols")]
    InvalidDimensions { n_rows: usize, n_cols: usize },

    #[error(
        "{kind} index {value} at position {position} out of range (max {max} for {bits} bits)"
    )]
    IndexOutOfRange {
        kind: AngleKind,
        position: usize,
        value: u16,
        max: u16,
        bits: u8,
    },

    #[error("expected {expected} {kind} angles for {n_rows}x{n_cols}, got {actual}")]
    AngleCountMismatch {
        kind: AngleKind,
        n_rows: usize,
        n_cols: usize,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite {kind} angle at position {position}")]
    NonFiniteAngle { kind: AngleKind, position: usize },

    #[error("matrix columns are not orthonormal (max residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("matrix shape {rows}x{cols} does not match expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
}
