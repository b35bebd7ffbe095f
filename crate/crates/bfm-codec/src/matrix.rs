use ndarray::Array2;
use num_complex::Complex64;

use crate::error::CodecError;

/// A beamforming feedback matrix: `n_rows x n_cols` complex entries with
/// orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct BfmMatrix {
    entries: Array2<Complex64>,
}

impl BfmMatrix {
    /// Wrap a matrix, checking column orthonormality against `tol`
    /// (max-norm of `V^H V - I`).
    pub fn new(entries: Array2<Complex64>, tol: f64) -> Result<Self, CodecError> {
        let m = Self { entries };
        let residual = m.unitarity_residual();
        if residual > tol {
            return Err(CodecError::NotOrthonormal { residual });
        }
        Ok(m)
    }

    /// Wrap a matrix without checking orthonormality.
    pub fn from_entries(entries: Array2<Complex64>) -> Self {
        Self { entries }
    }

    pub fn n_rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<Complex64> {
        self.entries
    }

    /// Max-norm of `V^H V - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.n_cols();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let mut dot = Complex64::new(0.0, 0.0);
                for r in 0..self.n_rows() {
                    dot += self.entries[(r, a)].conj() * self.entries[(r, b)];
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                let diff = (dot - expect).norm();
                if diff > worst {
                    worst = diff;
                }
            }
        }
        worst
    }

    /// Elementwise amplitudes, flattened row-major.
    pub fn amplitudes_row_major(&self) -> Vec<f64> {
        self.entries.iter().map(|c| c.norm()).collect()
    }

    /// Largest elementwise distance to another matrix of the same shape.
    pub fn max_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.entries.dim(), other.entries.dim());
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
