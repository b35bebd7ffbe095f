//! Bit-exact packing and unpacking of the compressed angle payload.
//!
//! Angles are packed least-significant-bit first with no per-subcarrier
//! padding. Within one subcarrier the wire order follows the
//! reconstruction product: for each column block i, the phi indices
//! `phi_{i,i} .. phi_{n_rows-1,i}` then the psi indices
//! `psi_{i+1,i} .. psi_{n_rows,i}`.

use bfm_codec::{angle_pair_count, AngleSet, QuantizationConfig};

use crate::bitstream::{BitReader, BitWriter};
use crate::error::CaptureError;

/// Result of unpacking one report payload.
#[derive(Debug, Clone)]
pub struct UnpackedAngles {
    pub angle_sets: Vec<AngleSet>,
    /// Bits left over after the last whole subcarrier.
    pub trailing_bits: usize,
}

/// Bits one subcarrier occupies on the wire.
pub fn bits_per_subcarrier(n_rows: usize, n_cols: usize, config: &QuantizationConfig) -> usize {
    angle_pair_count(n_rows, n_cols) * (config.b_phi as usize + config.b_psi as usize)
}

/// Decode as many whole subcarriers as the payload holds.
pub fn unpack_angle_bitstream(
    payload: &[u8],
    n_rows: usize,
    n_cols: usize,
    config: QuantizationConfig,
) -> Result<UnpackedAngles, CaptureError> {
    let per_sc = bits_per_subcarrier(n_rows, n_cols, &config);
    if per_sc == 0 {
        return Err(CaptureError::Codec(
            bfm_codec::CodecError::InvalidDimensions { n_rows, n_cols },
        ));
    }
    let total_bits = payload.len() * 8;
    let n_subcarriers = total_bits / per_sc;
    if n_subcarriers == 0 {
        return Err(CaptureError::TruncatedReport {
            bits: total_bits,
            needed: per_sc,
        });
    }

    let mut reader = BitReader::new(payload);
    let m = n_cols.min(n_rows - 1);
    let pairs = angle_pair_count(n_rows, n_cols);
    let mut angle_sets = Vec::with_capacity(n_subcarriers);
    for _ in 0..n_subcarriers {
        let mut phis = Vec::with_capacity(pairs);
        let mut psis = Vec::with_capacity(pairs);
        for i in 1..=m {
            for _ in i..n_rows {
                phis.push(reader.read(config.b_phi as usize));
            }
            for _ in i..n_rows {
                psis.push(reader.read(config.b_psi as usize));
            }
        }
        angle_sets.push(AngleSet::new(n_rows, n_cols, phis, psis, config)?);
    }

    Ok(UnpackedAngles {
        angle_sets,
        trailing_bits: total_bits - n_subcarriers * per_sc,
    })
}

/// Pack angle sets into the wire payload. All sets must share dimensions
/// and config (enforced upstream by `BfmFrameRecord`).
pub fn pack_angle_bitstream(angle_sets: &[AngleSet]) -> Vec<u8> {
    let mut writer = BitWriter::new();
    for set in angle_sets {
        let config = set.config();
        let n_rows = set.n_rows();
        let m = set.n_cols().min(n_rows - 1);
        let mut phi_at = 0usize;
        let mut psi_at = 0usize;
        for i in 1..=m {
            for _ in i..n_rows {
                writer.write(set.phi_indices()[phi_at], config.b_phi as usize);
                phi_at += 1;
            }
            for _ in i..n_rows {
                writer.write(set.psi_indices()[psi_at], config.b_psi as usize);
                psi_at += 1;
            }
        }
    }
    writer.into_bytes()
}
