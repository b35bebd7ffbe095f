//! Synthetic beamforming feedback captures with known breathing rates.
//!
//! A static per-subcarrier channel is perturbed by a sinusoid at the
//! scenario's breathing rate plus fresh complex noise; each feedback
//! instant takes the right singular matrix of the channel, compresses it
//! through the codec and emits a frame record. The result is the repo's
//! ground-truth oracle for end-to-end verification.

mod capture;
mod channel;
mod error;
mod scenario;
mod svd;

pub use capture::{generate_capture, ground_truth, SYNTH_DEST_MAC, SYNTH_SOURCE_MAC};
pub use channel::{generate_channel_at, ChannelModel};
pub use error::SynthError;
pub use scenario::BreathingScenario;
pub use svd::right_singular_vectors;
