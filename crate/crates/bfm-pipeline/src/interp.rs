//! Linear resampling of the irregular principal-component series onto the
//! uniform grid the DFT needs.

use crate::config::PipelineConfig;
use crate::error::PipelineError;

/// A uniformly sampled series of `n_interp` values.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSeries {
    pub values: Vec<f64>,
    /// Sample spacing in seconds.
    pub step: f64,
    /// How many tail samples fell beyond the last input point and held its
    /// value instead of interpolating.
    pub extrapolated: usize,
}

/// Sample `scores` at `t0 + k*step` for k = 0 .. n_interp-1 by linear
/// interpolation; samples beyond the last timestamp hold the last value.
pub fn interpolate_uniform(
    scores: &[f64],
    timestamps: &[f64],
    cfg: &PipelineConfig,
) -> Result<UniformSeries, PipelineError> {
    if scores.len() != timestamps.len() {
        return Err(PipelineError::ShapeMismatch(format!(
            "{} scores but {} timestamps",
            scores.len(),
            timestamps.len()
        )));
    }
    if scores.len() < 2 {
        return Err(PipelineError::InsufficientData {
            needed: 2,
            got: scores.len(),
        });
    }
    for (index, pair) in timestamps.windows(2).enumerate() {
        // NaN compares false here and is rejected along with ties.
        let increasing = pair[1] > pair[0];
        if !increasing {
            return Err(PipelineError::NonMonotonicTimestamps { index: index + 1 });
        }
    }

    let n = cfg.n_interp();
    let t0 = timestamps[0];
    let last_t = *timestamps.last().unwrap();
    let last_s = *scores.last().unwrap();
    let mut values = Vec::with_capacity(n);
    let mut extrapolated = 0usize;
    let mut seg = 0usize;
    for k in 0..n {
        let t = t0 + k as f64 * cfg.interp_interval;
        if t >= last_t {
            if t > last_t + 1e-12 {
                extrapolated += 1;
            }
            values.push(last_s);
            continue;
        }
        while seg + 2 < timestamps.len() && timestamps[seg + 1] <= t {
            seg += 1;
        }
        let (ta, tb) = (timestamps[seg], timestamps[seg + 1]);
        let w = (t - ta) / (tb - ta);
        values.push(scores[seg] + w * (scores[seg + 1] - scores[seg]));
    }

    Ok(UniformSeries {
        values,
        step: cfg.interp_interval,
        extrapolated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(window: f64, step: f64) -> PipelineConfig {
        PipelineConfig {
            window_length: window,
            interp_interval: step,
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn linear_segment() {
        let u = interpolate_uniform(&[0.0, 2.0], &[0.0, 1.0], &cfg(2.0, 0.5)).unwrap();
        assert_eq!(u.values.len(), 4);
        let expect = [0.0, 1.0, 2.0, 2.0];
        for (got, want) in u.values.iter().zip(expect) {
            assert!((got - want).abs() < 1e-12);
        }
        // only the sample at t = 1.5 lies beyond the last input point
        assert_eq!(u.extrapolated, 1);
    }

    #[test]
    fn uniform_input_is_identity() {
        let times: Vec<f64> = (0..20).map(|k| k as f64 * 0.1).collect();
        let scores: Vec<f64> = (0..20).map(|k| (k as f64).sin()).collect();
        let u = interpolate_uniform(&scores, &times, &cfg(2.0, 0.1)).unwrap();
        assert_eq!(u.values.len(), 20);
        for (got, want) in u.values.iter().zip(&scores) {
            assert_eq!(got, want);
        }
        assert_eq!(u.extrapolated, 0);
    }

    #[test]
    fn piecewise_hand_example() {
        let u = interpolate_uniform(&[0.0, 3.0, 4.0], &[0.0, 0.3, 0.4], &cfg(1.0, 0.1)).unwrap();
        assert_eq!(u.values.len(), 10);
        let expect = [0.0, 1.0, 2.0, 3.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.0];
        for (got, want) in u.values.iter().zip(expect) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        assert_eq!(u.extrapolated, 5);
    }

    #[test]
    fn too_few_points() {
        let err = interpolate_uniform(&[1.0], &[0.0], &cfg(1.0, 0.1)).unwrap_err();
        assert!(matches!(err, PipelineError::InsufficientData { .. }));
    }

    #[test]
    fn non_monotonic_rejected() {
        let err =
            interpolate_uniform(&[0.0, 1.0, 2.0], &[0.0, 0.5, 0.5], &cfg(1.0, 0.1)).unwrap_err();
        assert!(matches!(
            err,
            PipelineError::NonMonotonicTimestamps { index: 2 }
        ));
    }
}
