//! Reconstruction of a feedback matrix from Givens angles and the inverse
//! decomposition used when compressing a fresh singular matrix.

use ndarray::Array2;
use num_complex::Complex64;

use crate::angles::{angle_pair_count, dequantize_angles, quantize_angles, AngleSet};
use crate::config::QuantizationConfig;
use crate::error::CodecError;
use crate::matrix::BfmMatrix;

/// Pivot magnitudes below this are treated as degenerate directions; the
/// extracted angle is set to 0 (any angle reconstructs identically there).
const DEGENERATE_PIVOT: f64 = 1e-12;

/// Right-multiply `acc` by the diagonal phase matrix that scales column
/// `col` by `e^{j phase}`.
fn apply_phase_column(acc: &mut Array2<Complex64>, col: usize, phase: f64) {
    let scale = Complex64::from_polar(1.0, phase);
    for r in 0..acc.nrows() {
        acc[(r, col)] *= scale;
    }
}

/// Right-multiply `acc` by the transposed Givens rotation acting on columns
/// `c_i` and `c_l`: col_i <- cos*col_i + sin*col_l, col_l <- -sin*col_i + cos*col_l.
fn apply_givens_transposed_right(acc: &mut Array2<Complex64>, c_i: usize, c_l: usize, psi: f64) {
    let (sin, cos) = psi.sin_cos();
    for r in 0..acc.nrows() {
        let a = acc[(r, c_i)];
        let b = acc[(r, c_l)];
        acc[(r, c_i)] = cos * a + sin * b;
        acc[(r, c_l)] = -sin * a + cos * b;
    }
}

/// Left-multiply `w` by the Givens rotation acting on rows `r_i` and `r_l`:
/// row_i <- cos*row_i + sin*row_l, row_l <- -sin*row_i + cos*row_l.
fn apply_givens_left(w: &mut Array2<Complex64>, r_i: usize, r_l: usize, psi: f64) {
    let (sin, cos) = psi.sin_cos();
    for c in 0..w.ncols() {
        let a = w[(r_i, c)];
        let b = w[(r_l, c)];
        w[(r_i, c)] = cos * a + sin * b;
        w[(r_l, c)] = -sin * a + cos * b;
    }
}

/// Rebuild the feedback matrix from raw angles (radians).
///
/// Computes `V = [prod_i D_i (prod_l G_{l,i}^T)] I~` where `D_i` carries the
/// phi phases of block i and `G_{l,i}` is the planar rotation of rows i and
/// l by `psi_{l,i}`. Angles are consumed in block order, matching
/// [`AngleSet`] layout.
pub fn reconstruct_v_from_angles(
    n_rows: usize,
    n_cols: usize,
    phis: &[f64],
    psis: &[f64],
) -> Result<BfmMatrix, CodecError> {
    if n_rows < 2 || n_cols < 1 || n_cols > n_rows {
        return Err(CodecError::InvalidDimensions { n_rows, n_cols });
    }
    let expected = angle_pair_count(n_rows, n_cols);
    if phis.len() != expected || psis.len() != expected {
        return Err(CodecError::AngleCountMismatch {
            kind: crate::error::AngleKind::Phi,
            n_rows,
            n_cols,
            expected,
            actual: phis.len(),
        });
    }

    let mut acc = Array2::<Complex64>::eye(n_rows);
    let m = n_cols.min(n_rows - 1);
    let mut next = 0usize;
    for i in 1..=m {
        // D_i: phases phi_{k,i} on diagonal entries k = i .. n_rows-1 (1-indexed).
        for k in i..n_rows {
            apply_phase_column(&mut acc, k - 1, phis[next + (k - i)]);
        }
        // G_{l,i}^T for l = i+1 ..= n_rows.
        for l in (i + 1)..=n_rows {
            apply_givens_transposed_right(&mut acc, i - 1, l - 1, psis[next + (l - i - 1)]);
        }
        next += n_rows - i;
    }

    let v = acc.slice(ndarray::s![.., 0..n_cols]).to_owned();
    Ok(BfmMatrix::from_entries(v))
}

/// Rebuild the feedback matrix from a quantized angle set.
///
/// The result has orthonormal columns and a real, non-negative last row.
pub fn reconstruct_v(a: &AngleSet) -> BfmMatrix {
    let (phis, psis) = dequantize_angles(a);
    // An AngleSet is validated on construction, so this cannot fail.
    reconstruct_v_from_angles(a.n_rows(), a.n_cols(), &phis, &psis)
        .expect("validated angle set must reconstruct")
}

/// Raw Givens decomposition of a matrix with orthonormal columns.
///
/// Returns (phis, psis) in block order such that
/// [`reconstruct_v_from_angles`] rebuilds `v` up to the per-column phase
/// that makes the last row real and non-negative. Phis lie in [0, 2*pi),
/// psis in [0, pi/2].
pub fn decompose_v_raw(v: &BfmMatrix) -> Result<(Vec<f64>, Vec<f64>), CodecError> {
    let residual = v.unitarity_residual();
    if residual > 1e-6 {
        return Err(CodecError::NotOrthonormal { residual });
    }
    let n_rows = v.n_rows();
    let n_cols = v.n_cols();
    if n_rows < 2 || n_cols < 1 || n_cols > n_rows {
        return Err(CodecError::InvalidDimensions { n_rows, n_cols });
    }

    let mut w = v.entries().clone();

    // Align per-column phase so the last row is real non-negative.
    for c in 0..n_cols {
        let last = w[(n_rows - 1, c)];
        if last.norm() >= DEGENERATE_PIVOT {
            let scale = Complex64::from_polar(1.0, -last.arg());
            for r in 0..n_rows {
                w[(r, c)] *= scale;
            }
        }
    }

    let m = n_cols.min(n_rows - 1);
    let mut phis = Vec::with_capacity(angle_pair_count(n_rows, n_cols));
    let mut psis = Vec::with_capacity(phis.capacity());

    for i in 1..=m {
        // Extract phi_{k,i} from column i and cancel it across row k.
        for k in i..n_rows {
            let entry = w[(k - 1, i - 1)];
            let phi = if entry.norm() < DEGENERATE_PIVOT {
                0.0
            } else {
                entry.arg().rem_euclid(2.0 * std::f64::consts::PI)
            };
            phis.push(phi);
            if phi != 0.0 {
                let scale = Complex64::from_polar(1.0, -phi);
                for c in (i - 1)..n_cols {
                    w[(k - 1, c)] *= scale;
                }
            }
        }
        // Zero the sub-diagonal of column i with planar rotations. Both the
        // pivot and the target are real non-negative at this point, so psi
        // falls in [0, pi/2].
        for l in (i + 1)..=n_rows {
            let x = w[(i - 1, i - 1)].re;
            let y = w[(l - 1, i - 1)].re;
            let psi = if x.hypot(y) < DEGENERATE_PIVOT {
                0.0
            } else {
                y.atan2(x).clamp(0.0, std::f64::consts::FRAC_PI_2)
            };
            psis.push(psi);
            if psi != 0.0 {
                apply_givens_left(&mut w, i - 1, l - 1, psi);
            }
        }
    }

    Ok((phis, psis))
}

/// Decompose a matrix with orthonormal columns into a quantized angle set.
pub fn decompose_v(v: &BfmMatrix, config: QuantizationConfig) -> Result<AngleSet, CodecError> {
    let (phis, psis) = decompose_v_raw(v)?;
    quantize_angles(&phis, &psis, v.n_rows(), v.n_cols(), config)
}

/// Rotate each column of `v` so its last-row entry is real non-negative.
/// This is the phase convention produced by [`reconstruct_v`]; applying it
/// to an arbitrary singular matrix makes it directly comparable.
pub fn align_last_row_phase(v: &BfmMatrix) -> BfmMatrix {
    let mut w = v.entries().clone();
    let n_rows = w.nrows();
    for c in 0..w.ncols() {
        let last = w[(n_rows - 1, c)];
        if last.norm() >= DEGENERATE_PIVOT {
            let scale = Complex64::from_polar(1.0, -last.arg());
            for r in 0..n_rows {
                w[(r, c)] *= scale;
            }
        }
    }
    BfmMatrix::from_entries(w)
}
