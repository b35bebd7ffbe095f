//! Sliding-window evaluation of the full estimation chain over a capture
//! stream.

use bfm_capture::CaptureStream;
use ndarray::{Array2, ArrayView2};
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::error::PipelineError;
use crate::feature::{amplitude_row, feature_width};
use crate::interp::interpolate_uniform;
use crate::pca::apply_pca_view;
use crate::spectrum::{
    band_pass, compute_spectrum_tapered, detect_and_estimate, RespirationEstimate, WindowFlag,
};

/// Largest tolerable inter-frame gap before a window is flagged
/// low-confidence; interpolation bridges the gap either way.
pub const LOW_CONFIDENCE_GAP_SECS: f64 = 5.0;

/// Number of windows the stream supports: starts at k*step while
/// start + window_length <= duration.
pub fn window_count(duration: f64, cfg: &PipelineConfig) -> usize {
    if duration + 1e-9 < cfg.window_length {
        return 0;
    }
    ((duration - cfg.window_length) / cfg.window_step + 1e-9).floor() as usize + 1
}

/// Run feature arrangement, PCA, interpolation, DFT, band filter and
/// detection over every window of the stream. Windows with too few frames
/// or degenerate features yield a flagged non-detection instead of an
/// error. Output is ordered by window start.
pub fn sliding_estimate(
    stream: &CaptureStream,
    cfg: &PipelineConfig,
) -> Result<Vec<RespirationEstimate>, PipelineError> {
    cfg.validate()?;
    if stream.is_empty() {
        return Err(PipelineError::EmptyStream);
    }
    let first = &stream.records[0];
    for (i, r) in stream.records.iter().enumerate() {
        if r.n_rows != first.n_rows
            || r.n_cols != first.n_cols
            || r.n_subcarriers != first.n_subcarriers
            || r.config() != first.config()
        {
            return Err(PipelineError::ShapeMismatch(format!(
                "record {i} dimensions differ from record 0; filter the capture to one link first"
            )));
        }
    }

    // Decompress each frame once; windows reference row slices.
    let n = stream.records.len();
    let width = feature_width(first);
    let mut rows = Array2::zeros((n, width));
    let row_data: Vec<Vec<f64>> = stream.records.par_iter().map(amplitude_row).collect();
    for (r, data) in row_data.into_iter().enumerate() {
        for (c, x) in data.into_iter().enumerate() {
            rows[[r, c]] = x;
        }
    }
    let timestamps: Vec<f64> = stream.records.iter().map(|r| r.timestamp).collect();

    let count = window_count(stream.duration(), cfg);
    let estimates = (0..count)
        .into_par_iter()
        .map(|k| {
            let start = k as f64 * cfg.window_step;
            let end = start + cfg.window_length;
            let lo = timestamps.partition_point(|&t| t < start);
            let hi = timestamps.partition_point(|&t| t < end);
            evaluate_window(
                start,
                rows.slice(ndarray::s![lo..hi, ..]),
                &timestamps[lo..hi],
                cfg,
            )
        })
        .collect();
    Ok(estimates)
}

fn evaluate_window(
    start: f64,
    rows: ArrayView2<f64>,
    times: &[f64],
    cfg: &PipelineConfig,
) -> RespirationEstimate {
    let mut flags = Vec::new();
    if times.len() < 2 {
        flags.push(WindowFlag::TooFewFrames);
        return RespirationEstimate::empty(start, flags);
    }
    let largest_gap = times.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
    if largest_gap > LOW_CONFIDENCE_GAP_SECS {
        flags.push(WindowFlag::LargeGap);
    }

    let series = match apply_pca_view(rows) {
        Ok(series) => series,
        Err(PipelineError::DegenerateInput) => {
            flags.push(WindowFlag::DegenerateWindow);
            return RespirationEstimate::empty(start, flags);
        }
        Err(_) => {
            flags.push(WindowFlag::TooFewFrames);
            return RespirationEstimate::empty(start, flags);
        }
    };
    let uniform = match interpolate_uniform(&series.scores, times, cfg) {
        Ok(u) => u,
        Err(_) => {
            flags.push(WindowFlag::TooFewFrames);
            return RespirationEstimate::empty(start, flags);
        }
    };
    let spectrum = compute_spectrum_tapered(&uniform, cfg.hann_taper, cfg.zero_pad_to);
    let banded = match band_pass(&spectrum, cfg) {
        Ok(b) => b,
        Err(_) => {
            flags.push(WindowFlag::EmptyBand);
            return RespirationEstimate::empty(start, flags);
        }
    };
    let mut estimate = detect_and_estimate(&banded, cfg);
    estimate.window_start = start;
    estimate.flags = flags;
    estimate
}
