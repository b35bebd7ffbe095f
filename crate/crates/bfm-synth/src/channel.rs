//! Static multipath channel plus a low-rank sinusoidal breathing
//! perturbation and fresh per-frame noise.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use crate::scenario::BreathingScenario;

/// Frozen per-scenario channel state: one static matrix and one unit-norm
/// perturbation direction per subcarrier, both in receiver-by-transmitter
/// orientation (n_cols x n_rows).
#[derive(Debug, Clone)]
pub struct ChannelModel {
    pub static_h: Vec<Array2<Complex64>>,
    pub breathing_direction: Vec<Array2<Complex64>>,
}

/// Unit-variance complex Gaussian (E|z|^2 = 1) via Box-Muller.
fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    Complex64::new(r * theta.cos(), r * theta.sin()) * std::f64::consts::FRAC_1_SQRT_2
}

impl ChannelModel {
    /// Draw the static channel and the breathing direction once per
    /// scenario from the seeded stream.
    pub fn generate<R: Rng>(scenario: &BreathingScenario, rng: &mut R) -> Self {
        let shape = (scenario.n_cols, scenario.n_rows);
        let mut static_h = Vec::with_capacity(scenario.n_subcarriers);
        let mut breathing_direction = Vec::with_capacity(scenario.n_subcarriers);
        for _ in 0..scenario.n_subcarriers {
            static_h.push(Array2::from_shape_fn(shape, |_| complex_gaussian(rng)));
            let mut dir = Array2::from_shape_fn(shape, |_| complex_gaussian(rng));
            let frob = dir.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if frob > 0.0 {
                dir.mapv_inplace(|c| c / frob);
            }
            breathing_direction.push(dir);
        }
        Self {
            static_h,
            breathing_direction,
        }
    }
}

/// Instantaneous per-subcarrier channel matrices:
/// `H(t) = H_static + gain * sin(2*pi*(rate/60)*t) * direction + sigma * noise`
/// with the noise drawn fresh per entry from `rng`. A breath-hold scenario
/// (rate 0) omits the sinusoid term.
pub fn generate_channel_at<R: Rng>(
    t: f64,
    model: &ChannelModel,
    scenario: &BreathingScenario,
    rng: &mut R,
) -> Vec<Array2<Complex64>> {
    let breathing = if scenario.rate > 0.0 {
        scenario.breathing_gain * (2.0 * std::f64::consts::PI * (scenario.rate / 60.0) * t).sin()
    } else {
        0.0
    };
    model
        .static_h
        .iter()
        .zip(&model.breathing_direction)
        .map(|(h0, dir)| {
            let mut h = h0.clone();
            if breathing != 0.0 {
                h.zip_mut_with(dir, |a, d| *a += breathing * d);
            }
            if scenario.noise_sigma > 0.0 {
                h.mapv_inplace(|a| a + scenario.noise_sigma * complex_gaussian(rng));
            }
            h
        })
        .collect()
}
