//! Frame generation: sample the channel at feedback instants, take the
//! right singular matrix per subcarrier, compress it through the codec and
//! assemble a capture stream.

use bfm_capture::{BfmFrameRecord, CaptureStream, MacAddr, StreamMetadata};
use bfm_codec::{decompose_v_raw, quantize_angles, AngleSet, BfmMatrix};
use bfm_pipeline::{window_count, PipelineConfig};
use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{generate_channel_at, ChannelModel};
use crate::error::SynthError;
use crate::scenario::BreathingScenario;
use crate::svd::right_singular_vectors;

/// Station address stamped on synthesized frames.
pub const SYNTH_SOURCE_MAC: MacAddr = bfm_capture::DEFAULT_SOURCE_MAC;
/// Access-point address stamped on synthesized frames.
pub const SYNTH_DEST_MAC: MacAddr = bfm_capture::DEFAULT_DEST_MAC;

const SVD_RETRIES: usize = 3;

fn frame_angle_sets(
    channels: &[Array2<Complex64>],
    scenario: &BreathingScenario,
) -> Result<Vec<AngleSet>, SynthError> {
    channels
        .iter()
        .map(|h| {
            let (_sigmas, v) = right_singular_vectors(h)?;
            let bfm = BfmMatrix::from_entries(v);
            let (phis, psis) = decompose_v_raw(&bfm)?;
            Ok(quantize_angles(
                &phis,
                &psis,
                scenario.n_rows,
                scenario.n_cols,
                scenario.config,
            )?)
        })
        .collect()
}

/// Generate the labeled capture for a scenario. Feedback instants start at
/// t = 0 and advance by the mean interval plus uniform jitter while they
/// stay below the scenario duration.
pub fn generate_capture(scenario: &BreathingScenario) -> Result<CaptureStream, SynthError> {
    scenario.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let model = ChannelModel::generate(scenario, &mut rng);

    let mut records = Vec::new();
    let mut jitter_acc = 0.0f64;
    let mut index = 0u64;
    loop {
        let t = index as f64 * scenario.feedback_interval_mean + jitter_acc;
        if t >= scenario.duration {
            break;
        }
        let mut attempt = 0;
        let sets = loop {
            let channels = generate_channel_at(t, &model, scenario, &mut rng);
            match frame_angle_sets(&channels, scenario) {
                Ok(sets) => break sets,
                Err(err) => {
                    attempt += 1;
                    if attempt > SVD_RETRIES || scenario.noise_sigma == 0.0 {
                        return Err(err);
                    }
                }
            }
        };
        records.push(BfmFrameRecord::new(
            t,
            SYNTH_SOURCE_MAC,
            SYNTH_DEST_MAC,
            sets,
        )?);
        if scenario.feedback_interval_jitter > 0.0 {
            jitter_acc += (rng.random::<f64>() * 2.0 - 1.0) * scenario.feedback_interval_jitter;
        }
        index += 1;
    }

    let metadata = StreamMetadata {
        source: "synth".to_string(),
        duration: scenario.duration,
        ..StreamMetadata::default()
    };
    Ok(CaptureStream::new(records, metadata))
}

/// The constant ground-truth rate for every window the pipeline will
/// produce over this scenario's duration.
pub fn ground_truth(scenario: &BreathingScenario, cfg: &PipelineConfig) -> Vec<(f64, f64)> {
    let count = window_count(scenario.duration, cfg);
    (0..count)
        .map(|k| (k as f64 * cfg.window_step, scenario.rate))
        .collect()
}
