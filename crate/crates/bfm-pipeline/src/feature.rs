//! Arrangement of decompressed feedback amplitudes into the per-window
//! feature matrix: one row per frame, one column per (subcarrier, matrix
//! entry) pair.

use bfm_capture::BfmFrameRecord;
use bfm_codec::reconstruct_v;
use ndarray::Array2;

use crate::error::PipelineError;

/// A time window's amplitudes, `n_frames x (n_rows*n_cols*n_subcarriers)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub values: Array2<f64>,
    pub timestamps: Vec<f64>,
}

impl FeatureMatrix {
    pub fn n_frames(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.values.ncols()
    }
}

/// One frame's feature row: for each subcarrier in ascending order, the
/// amplitudes of the reconstructed matrix flattened row-major. This fixed
/// column order is what makes PCA inputs reproducible.
pub fn amplitude_row(record: &BfmFrameRecord) -> Vec<f64> {
    let mut row = Vec::with_capacity(record.n_subcarriers * record.n_rows * record.n_cols);
    for set in &record.angle_sets {
        let v = reconstruct_v(set);
        row.extend(v.entries().iter().map(|c| c.norm()));
    }
    row
}

/// Width of one feature row for a record's dimensions.
pub fn feature_width(record: &BfmFrameRecord) -> usize {
    record.n_rows * record.n_cols * record.n_subcarriers
}

pub fn build_feature_matrix(frames: &[BfmFrameRecord]) -> Result<FeatureMatrix, PipelineError> {
    let first = frames
        .first()
        .ok_or(PipelineError::InsufficientData { needed: 1, got: 0 })?;
    let width = feature_width(first);
    for (i, frame) in frames.iter().enumerate() {
        if frame.n_rows != first.n_rows
            || frame.n_cols != first.n_cols
            || frame.n_subcarriers != first.n_subcarriers
            || frame.config() != first.config()
        {
            return Err(PipelineError::ShapeMismatch(format!(
                "frame {i} is {}x{}x{} but frame 0 is {}x{}x{}",
                frame.n_rows,
                frame.n_cols,
                frame.n_subcarriers,
                first.n_rows,
                first.n_cols,
                first.n_subcarriers
            )));
        }
    }

    let mut values = Array2::zeros((frames.len(), width));
    for (r, frame) in frames.iter().enumerate() {
        let row = amplitude_row(frame);
        for (c, x) in row.into_iter().enumerate() {
            values[[r, c]] = x;
        }
    }
    Ok(FeatureMatrix {
        values,
        timestamps: frames.iter().map(|f| f.timestamp).collect(),
    })
}
