//! Respiratory-rate estimation over beamforming feedback streams.
//!
//! The chain per window: arrange decompressed amplitudes into a frame-by-
//! feature matrix, take the first principal component, resample it onto a
//! uniform grid, transform to the frequency domain, keep the respiration
//! band, and apply the peak-to-mean detection rule. [`sliding_estimate`]
//! runs the chain over overlapping windows; every operation is also
//! available standalone and is a pure function.

mod config;
mod error;
mod eval;
mod feature;
mod interp;
mod linalg;
mod pca;
mod sliding;
mod spectrum;

pub use config::PipelineConfig;
pub use error::PipelineError;
pub use eval::rmse;
pub use feature::{amplitude_row, build_feature_matrix, feature_width, FeatureMatrix};
pub use interp::{interpolate_uniform, UniformSeries};
pub use linalg::{symmetric_eigen_desc, SymmetricEigen};
pub use pca::{apply_pca, PrincipalSeries};
pub use sliding::{sliding_estimate, window_count, LOW_CONFIDENCE_GAP_SECS};
pub use spectrum::{
    band_pass, compute_spectrum, compute_spectrum_tapered, detect_and_estimate,
    RespirationEstimate, Spectrum, WindowFlag,
};
