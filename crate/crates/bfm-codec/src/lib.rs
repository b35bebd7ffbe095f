//! Codec between quantized Givens-rotation angle indices and complex
//! beamforming feedback matrices.
//!
//! The forward direction ([`reconstruct_v`]) rebuilds the unit matrix a
//! station fed back from its angle indices; the inverse ([`decompose_v`])
//! factors a freshly computed singular matrix into angles so it can be
//! compressed onto the wire. All operations are pure functions.

mod angles;
mod config;
mod error;
mod givens;
mod matrix;

pub use angles::{
    angle_pair_count, dequantize_angles, quantize_angles, quantize_phi, quantize_psi, AngleSet,
};
pub use config::QuantizationConfig;
pub use error::{AngleKind, CodecError};
pub use givens::{
    align_last_row_phase, decompose_v, decompose_v_raw, reconstruct_v, reconstruct_v_from_angles,
};
pub use matrix::BfmMatrix;
