//! Error metric between estimates and ground truth.

use crate::error::PipelineError;
use crate::spectrum::RespirationEstimate;

/// Root mean squared error in breaths/minute over aligned windows,
/// including windows that reported rate 0.
pub fn rmse(estimates: &[RespirationEstimate], truth: &[(f64, f64)]) -> Result<f64, PipelineError> {
    if estimates.len() != truth.len() {
        return Err(PipelineError::AlignmentMismatch(format!(
            "{} estimates vs {} truth windows",
            estimates.len(),
            truth.len()
        )));
    }
    if estimates.is_empty() {
        return Err(PipelineError::AlignmentMismatch(
            "no windows to score".to_string(),
        ));
    }
    let mut sum = 0.0f64;
    for (e, (start, rate)) in estimates.iter().zip(truth) {
        if (e.window_start - start).abs() > 1e-9 {
            return Err(PipelineError::AlignmentMismatch(format!(
                "window starts diverge: {} vs {}",
                e.window_start, start
            )));
        }
        sum += (e.rate - rate) * (e.rate - rate);
    }
    Ok((sum / estimates.len() as f64).sqrt())
}
