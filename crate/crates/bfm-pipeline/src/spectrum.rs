//! DFT magnitudes, the respiration band filter and the peak-to-mean
//! detection rule.

use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::PipelineError;
use crate::interp::UniformSeries;

/// Tolerance for matching bin frequencies against band edges; edges are
/// inclusive and bin frequencies carry rounding error from the sample step.
const FREQ_EPS: f64 = 1e-9;

/// One-sided DFT magnitudes, bin k at frequency `k * bin_width`
/// breaths/minute.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub magnitudes: Vec<f64>,
    pub bin_width: f64,
}

impl Spectrum {
    pub fn frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.bin_width
    }
}

/// Magnitudes of the one-sided DFT, bins 0 ..= floor(N/2), no taper and no
/// padding.
pub fn compute_spectrum(u: &UniformSeries) -> Spectrum {
    compute_spectrum_tapered(u, false, None)
}

/// [`compute_spectrum`] with the optional Hann taper and zero padding.
pub fn compute_spectrum_tapered(
    u: &UniformSeries,
    hann_taper: bool,
    zero_pad_to: Option<usize>,
) -> Spectrum {
    let raw_len = u.values.len();
    let mut values = u.values.clone();
    if hann_taper && raw_len > 1 {
        for (i, v) in values.iter_mut().enumerate() {
            let w =
                0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / (raw_len - 1) as f64).cos());
            *v *= w;
        }
    }
    let n = zero_pad_to.map_or(raw_len, |p| p.max(raw_len));
    values.resize(n, 0.0);

    // Twiddle table: e^{-2*pi*i*j/n}; (k*m) mod n indexes it exactly.
    let mut cos_table = Vec::with_capacity(n);
    let mut sin_table = Vec::with_capacity(n);
    for j in 0..n {
        let angle = -2.0 * std::f64::consts::PI * j as f64 / n as f64;
        cos_table.push(angle.cos());
        sin_table.push(angle.sin());
    }

    let bins = n / 2 + 1;
    let mut magnitudes = Vec::with_capacity(bins);
    for k in 0..bins {
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        let mut idx = 0usize;
        for &x in &values {
            re += x * cos_table[idx];
            im += x * sin_table[idx];
            idx += k;
            if idx >= n {
                idx -= n;
            }
        }
        magnitudes.push(re.hypot(im));
    }

    // bin_width = 60 / (n * step) breaths/minute; dividing 60 by n first
    // keeps the default grid exact (60/600 = 0.1 -> width exactly 1.0).
    let bin_width = (60.0 / n as f64) / u.step;
    Spectrum {
        magnitudes,
        bin_width,
    }
}

fn in_band(freq: f64, cfg: &PipelineConfig) -> bool {
    freq >= cfg.band_low - FREQ_EPS && freq <= cfg.band_high + FREQ_EPS
}

/// Zero every bin outside [band_low, band_high]; edges inclusive.
pub fn band_pass(s: &Spectrum, cfg: &PipelineConfig) -> Result<Spectrum, PipelineError> {
    let mut out = s.clone();
    let mut kept = 0usize;
    for (k, mag) in out.magnitudes.iter_mut().enumerate() {
        if in_band(k as f64 * s.bin_width, cfg) {
            kept += 1;
        } else {
            *mag = 0.0;
        }
    }
    if kept == 0 {
        return Err(PipelineError::InvalidConfig(format!(
            "band [{}, {}] contains no spectrum bins (bin width {})",
            cfg.band_low, cfg.band_high, s.bin_width
        )));
    }
    Ok(out)
}

/// Why a window produced no usable estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowFlag {
    /// Fewer than two frames fell inside the window.
    TooFewFrames,
    /// The window's features carried zero variance.
    DegenerateWindow,
    /// The largest inter-frame gap exceeded the low-confidence bound.
    LargeGap,
    /// No spectrum bin fell inside the configured band.
    EmptyBand,
}

/// Per-window estimation result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RespirationEstimate {
    /// Window start in seconds from the beginning of the stream.
    pub window_start: f64,
    /// Whether the peak-to-mean ratio reached the detection threshold.
    pub detected: bool,
    /// Estimated rate in breaths/minute; 0 when not detected.
    pub rate: f64,
    /// Peak-to-mean ratio over the in-band bins.
    pub ratio: f64,
    /// Degenerate-window annotations.
    pub flags: Vec<WindowFlag>,
}

impl RespirationEstimate {
    pub(crate) fn empty(window_start: f64, flags: Vec<WindowFlag>) -> Self {
        Self {
            window_start,
            detected: false,
            rate: 0.0,
            ratio: 0.0,
            flags,
        }
    }
}

/// Peak-to-mean detection over the in-band bins of an already band-passed
/// spectrum. Ties in the peak search resolve toward the lowest frequency.
pub fn detect_and_estimate(s: &Spectrum, cfg: &PipelineConfig) -> RespirationEstimate {
    let mut peak_bin = None;
    let mut peak = 0.0f64;
    let mut sum = 0.0f64;
    let mut count = 0usize;
    for (k, &mag) in s.magnitudes.iter().enumerate() {
        if !in_band(k as f64 * s.bin_width, cfg) {
            continue;
        }
        count += 1;
        sum += mag;
        if mag > peak {
            peak = mag;
            peak_bin = Some(k);
        }
    }
    if count == 0 || sum <= 0.0 {
        return RespirationEstimate::empty(0.0, vec![]);
    }
    let mean = sum / count as f64;
    let ratio = peak / mean;
    if ratio >= cfg.theta {
        RespirationEstimate {
            window_start: 0.0,
            detected: true,
            rate: s.frequency(peak_bin.expect("nonzero sum implies a peak")),
            ratio,
            flags: vec![],
        }
    } else {
        RespirationEstimate {
            window_start: 0.0,
            detected: false,
            rate: 0.0,
            ratio,
            flags: vec![],
        }
    }
}
