use bfm_codec::QuantizationConfig;

use crate::error::SynthError;

/// Everything needed to synthesize one labeled capture.
#[derive(Debug, Clone, PartialEq)]
pub struct BreathingScenario {
    /// Ground-truth breathing rate in breaths/minute; 0 means breath hold.
    pub rate: f64,
    /// Capture session length in seconds.
    pub duration: f64,
    /// Mean feedback interval in seconds.
    pub feedback_interval_mean: f64,
    /// Uniform jitter half-width added to each interval, in seconds.
    pub feedback_interval_jitter: f64,
    /// Relative amplitude of the breathing perturbation.
    pub breathing_gain: f64,
    /// Per-entry complex noise scale drawn fresh every frame.
    pub noise_sigma: f64,
    /// RNG seed; identical scenarios and seeds emit identical captures.
    pub seed: u64,
    pub n_rows: usize,
    pub n_cols: usize,
    pub n_subcarriers: usize,
    pub config: QuantizationConfig,
}

impl Default for BreathingScenario {
    fn default() -> Self {
        Self {
            rate: 15.0,
            duration: 300.0,
            feedback_interval_mean: 0.20,
            feedback_interval_jitter: 0.02,
            breathing_gain: 0.5,
            noise_sigma: 0.05,
            seed: 1,
            n_rows: 4,
            n_cols: 4,
            n_subcarriers: 250,
            config: QuantizationConfig::SU_FINE,
        }
    }
}

impl BreathingScenario {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidScenario(m));
        let non_negative = |v: f64| v.is_finite() && v >= 0.0;
        if !non_negative(self.rate) {
            return bad(format!(
                "rate {} must be finite and non-negative",
                self.rate
            ));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return bad(format!("duration {} must be positive", self.duration));
        }
        if !(self.feedback_interval_mean.is_finite() && self.feedback_interval_mean > 0.0) {
            return bad(format!(
                "feedback interval {} must be positive",
                self.feedback_interval_mean
            ));
        }
        if !non_negative(self.feedback_interval_jitter)
            || self.feedback_interval_jitter >= self.feedback_interval_mean
        {
            return bad(format!(
                "jitter {} must be in [0, interval {})",
                self.feedback_interval_jitter, self.feedback_interval_mean
            ));
        }
        if !non_negative(self.breathing_gain) {
            return bad(format!(
                "breathing_gain {} must be non-negative",
                self.breathing_gain
            ));
        }
        if !non_negative(self.noise_sigma) {
            return bad(format!(
                "noise_sigma {} must be non-negative",
                self.noise_sigma
            ));
        }
        if self.n_rows < 2 || self.n_cols < 1 || self.n_cols > self.n_rows {
            return bad(format!(
                "dimensions {}x{} unsupported (need n_rows >= 2, 1 <= n_cols <= n_rows)",
                self.n_rows, self.n_cols
            ));
        }
        if self.n_subcarriers == 0 {
            return bad("n_subcarriers must be at least 1".to_string());
        }
        Ok(())
    }
}
