use std::f64::consts::PI;

use crate::config::QuantizationConfig;
use crate::error::{AngleKind, CodecError};

/// Number of (phi, psi) angle pairs carried by one subcarrier's report for
/// an `n_rows x n_cols` feedback matrix: sum over i of (n_rows - i) with
/// i = 1 ..= min(n_cols, n_rows - 1).
pub fn angle_pair_count(n_rows: usize, n_cols: usize) -> usize {
    let m = n_cols.min(n_rows.saturating_sub(1));
    (1..=m).map(|i| n_rows - i).sum()
}

/// Quantized Givens angle indices for one subcarrier.
///
/// Indices are stored grouped by the column index `i` of the reconstruction
/// product: for each i, first the phi block `phi_{i,i} .. phi_{n_rows-1,i}`,
/// then the psi block `psi_{i+1,i} .. psi_{n_rows,i}`. `phi_indices` holds
/// the concatenated phi blocks and `psi_indices` the psi blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleSet {
    n_rows: usize,
    n_cols: usize,
    phi_indices: Vec<u16>,
    psi_indices: Vec<u16>,
    config: QuantizationConfig,
}

impl AngleSet {
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        phi_indices: Vec<u16>,
        psi_indices: Vec<u16>,
        config: QuantizationConfig,
    ) -> Result<Self, CodecError> {
        if n_rows < 2 || n_cols < 1 || n_cols > n_rows {
            return Err(CodecError::InvalidDimensions { n_rows, n_cols });
        }
        let expected = angle_pair_count(n_rows, n_cols);
        if phi_indices.len() != expected {
            return Err(CodecError::AngleCountMismatch {
                kind: AngleKind::Phi,
                n_rows,
                n_cols,
                expected,
                actual: phi_indices.len(),
            });
        }
        if psi_indices.len() != expected {
            return Err(CodecError::AngleCountMismatch {
                kind: AngleKind::Psi,
                n_rows,
                n_cols,
                expected,
                actual: psi_indices.len(),
            });
        }
        for (position, &value) in phi_indices.iter().enumerate() {
            if value > config.max_phi_index() {
                return Err(CodecError::IndexOutOfRange {
                    kind: AngleKind::Phi,
                    position,
                    value,
                    max: config.max_phi_index(),
                    bits: config.b_phi,
                });
            }
        }
        for (position, &value) in psi_indices.iter().enumerate() {
            if value > config.max_psi_index() {
                return Err(CodecError::IndexOutOfRange {
                    kind: AngleKind::Psi,
                    position,
                    value,
                    max: config.max_psi_index(),
                    bits: config.b_psi,
                });
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            phi_indices,
            psi_indices,
            config,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn phi_indices(&self) -> &[u16] {
        &self.phi_indices
    }

    pub fn psi_indices(&self) -> &[u16] {
        &self.psi_indices
    }

    pub fn config(&self) -> &QuantizationConfig {
        &self.config
    }
}

fn dequantize_phi_index(k: u16, b_phi: u8) -> f64 {
    k as f64 * PI / (1u64 << (b_phi - 1)) as f64 + PI / (1u64 << b_phi) as f64
}

fn dequantize_psi_index(k: u16, b_psi: u8) -> f64 {
    k as f64 * PI / (1u64 << (b_psi + 1)) as f64 + PI / (1u64 << (b_psi + 2)) as f64
}

/// Map angle indices back to radians.
///
/// Phi lands on bin centers in (0, 2*pi), psi on bin centers in (0, pi/2).
/// Output order mirrors the index order of the set.
pub fn dequantize_angles(a: &AngleSet) -> (Vec<f64>, Vec<f64>) {
    let phis = a
        .phi_indices()
        .iter()
        .map(|&k| dequantize_phi_index(k, a.config().b_phi))
        .collect();
    let psis = a
        .psi_indices()
        .iter()
        .map(|&k| dequantize_psi_index(k, a.config().b_psi))
        .collect();
    (phis, psis)
}

/// Nearest-bin quantization of one phi angle. The angle is wrapped modulo
/// 2*pi first; values that fall outside the bin-center range snap to the
/// nearest end bin.
pub fn quantize_phi(phi: f64, config: &QuantizationConfig) -> Result<u16, CodecError> {
    if !phi.is_finite() {
        return Err(CodecError::NonFiniteAngle {
            kind: AngleKind::Phi,
            position: 0,
        });
    }
    let wrapped = phi.rem_euclid(2.0 * PI);
    let spacing = PI / (1u64 << (config.b_phi - 1)) as f64;
    let offset = PI / (1u64 << config.b_phi) as f64;
    let k = ((wrapped - offset) / spacing).round();
    Ok(clamp_index(k, config.max_phi_index()))
}

/// Nearest-bin quantization of one psi angle, clamped into [0, pi/2].
pub fn quantize_psi(psi: f64, config: &QuantizationConfig) -> Result<u16, CodecError> {
    if !psi.is_finite() {
        return Err(CodecError::NonFiniteAngle {
            kind: AngleKind::Psi,
            position: 0,
        });
    }
    let clamped = psi.clamp(0.0, PI / 2.0);
    let spacing = PI / (1u64 << (config.b_psi + 1)) as f64;
    let offset = PI / (1u64 << (config.b_psi + 2)) as f64;
    let k = ((clamped - offset) / spacing).round();
    Ok(clamp_index(k, config.max_psi_index()))
}

fn clamp_index(k: f64, max: u16) -> u16 {
    if k <= 0.0 {
        0
    } else if k >= max as f64 {
        max
    } else {
        k as u16
    }
}

/// Quantize raw angles into an [`AngleSet`] for the given dimensions.
///
/// Round-trip error after [`dequantize_angles`] is at most half a bin:
/// |dphi| <= pi / 2^b_phi and |dpsi| <= pi / 2^(b_psi + 2).
pub fn quantize_angles(
    phis: &[f64],
    psis: &[f64],
    n_rows: usize,
    n_cols: usize,
    config: QuantizationConfig,
) -> Result<AngleSet, CodecError> {
    let phi_indices = phis
        .iter()
        .enumerate()
        .map(|(position, &phi)| {
            quantize_phi(phi, &config).map_err(|_| CodecError::NonFiniteAngle {
                kind: AngleKind::Phi,
                position,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let psi_indices = psis
        .iter()
        .enumerate()
        .map(|(position, &psi)| {
            quantize_psi(psi, &config).map_err(|_| CodecError::NonFiniteAngle {
                kind: AngleKind::Psi,
                position,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    AngleSet::new(n_rows, n_cols, phi_indices, psi_indices, config)
}
