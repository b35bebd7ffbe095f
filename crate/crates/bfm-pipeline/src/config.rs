use serde::{Deserialize, Serialize};

use crate::error::PipelineError;

/// Windowing, interpolation, band and detection parameters.
///
/// Defaults follow the reference operating point: 60 s windows stepped by
/// 1 s, interpolation to a 0.1 s grid, a [10, 50] breaths/minute band and
/// detection threshold 5.0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Window length in seconds.
    pub window_length: f64,
    /// Step between consecutive window starts in seconds.
    pub window_step: f64,
    /// Uniform resampling interval in seconds.
    pub interp_interval: f64,
    /// Band-pass lower edge in breaths/minute (inclusive).
    pub band_low: f64,
    /// Band-pass upper edge in breaths/minute (inclusive).
    pub band_high: f64,
    /// Peak-to-mean detection threshold.
    pub theta: f64,
    /// Apply a Hann taper before the DFT. Off by default; the default
    /// spectral resolution is exactly one bin per breath/minute.
    pub hann_taper: bool,
    /// Zero-pad the series to this length before the DFT. Off by default.
    pub zero_pad_to: Option<usize>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            window_length: 60.0,
            window_step: 1.0,
            interp_interval: 0.1,
            band_low: 10.0,
            band_high: 50.0,
            theta: 5.0,
            hann_taper: false,
            zero_pad_to: None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |message: String| Err(PipelineError::InvalidConfig(message));
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.window_length) {
            return bad(format!(
                "window_length {} must be positive",
                self.window_length
            ));
        }
        if !positive(self.window_step) || self.window_step > self.window_length {
            return bad(format!(
                "window_step {} must be in (0, window_length {}]",
                self.window_step, self.window_length
            ));
        }
        if !positive(self.interp_interval) {
            return bad(format!(
                "interp_interval {} must be positive",
                self.interp_interval
            ));
        }
        let nyquist = 60.0 / (2.0 * self.interp_interval);
        if !positive(self.band_low)
            || !self.band_high.is_finite()
            || self.band_low >= self.band_high
            || self.band_high >= nyquist
        {
            return bad(format!(
                "band [{}, {}] must satisfy 0 < low < high < {} breaths/minute (Nyquist)",
                self.band_low, self.band_high, nyquist
            ));
        }
        if !self.theta.is_finite() || self.theta < 0.0 {
            return bad(format!(
                "theta {} must be finite and non-negative",
                self.theta
            ));
        }
        Ok(())
    }

    /// Number of uniform samples per window: floor(window_length / interval),
    /// with a guard against the quotient landing just under an integer.
    pub fn n_interp(&self) -> usize {
        (self.window_length / self.interp_interval + 1e-9).floor() as usize
    }
}
