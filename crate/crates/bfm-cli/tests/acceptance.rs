//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured quantity (visible with `--nocapture`).
//!
//! Oracles here are self-contained: the brute-force PCA reference is an
//! independent Jacobi eigendecomposition of the explicit covariance, not
//! the pipeline's solver.

use std::f64::consts::PI;
use std::path::PathBuf;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bfm_capture::{
    read_pcap_bytes, write_fixture_to, BfmFrameRecord, CaptureStream, MacFilter, StreamMetadata,
};
use bfm_codec::{
    align_last_row_phase, angle_pair_count, decompose_v, decompose_v_raw, dequantize_angles,
    quantize_angles, reconstruct_v, reconstruct_v_from_angles, AngleSet, BfmMatrix,
    QuantizationConfig,
};
use bfm_pipeline::{
    apply_pca, band_pass, build_feature_matrix, compute_spectrum, detect_and_estimate, rmse,
    sliding_estimate, window_count, FeatureMatrix, PipelineConfig, UniformSeries,
};
use bfm_synth::{generate_capture, ground_truth, BreathingScenario};

const PRESETS: [QuantizationConfig; 4] = [
    QuantizationConfig::SU_COARSE,
    QuantizationConfig::SU_FINE,
    QuantizationConfig::MU_COARSE,
    QuantizationConfig::MU_FINE,
];

fn testdata(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../testdata")
        .join(name)
}

fn random_angle_set(rng: &mut ChaCha8Rng, config: QuantizationConfig) -> AngleSet {
    let n_rows = rng.random_range(2..=4usize);
    let n_cols = rng.random_range(1..=n_rows);
    let count = angle_pair_count(n_rows, n_cols);
    let phis = (0..count)
        .map(|_| rng.random_range(0..=config.max_phi_index()))
        .collect();
    let psis = (0..count)
        .map(|_| rng.random_range(0..=config.max_psi_index()))
        .collect();
    AngleSet::new(n_rows, n_cols, phis, psis, config).unwrap()
}

fn random_orthonormal(rng: &mut ChaCha8Rng, n_rows: usize, n_cols: usize) -> BfmMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    while cols.len() < n_cols {
        let mut v: Vec<Complex64> = (0..n_rows)
            .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        for prev in &cols {
            let dot: Complex64 = prev.iter().zip(&v).map(|(p, x)| p.conj() * x).sum();
            for (x, p) in v.iter_mut().zip(prev) {
                *x -= dot * p;
            }
        }
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-6 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        cols.push(v);
    }
    let mut m = Array2::<Complex64>::zeros((n_rows, n_cols));
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            m[(i, j)] = *x;
        }
    }
    BfmMatrix::from_entries(m)
}

#[test]
fn criterion_1_codec_round_trip() {
    // Index-level idempotence over 1000 random angle sets, 250 per preset.
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DEC);
    for config in PRESETS {
        for _ in 0..250 {
            let set = random_angle_set(&mut rng, config);
            let v = reconstruct_v(&set);
            let back = decompose_v(&v, config).unwrap();
            assert_eq!(set, back, "index round-trip must be exact");
        }
    }

    // Continuous round-trip over 1000 random orthonormal matrices, and
    // quantized angle error within the half-bin bounds, 250 per preset.
    let mut worst_continuous = 0.0f64;
    for config in PRESETS {
        let phi_bound = PI / (1u64 << config.b_phi) as f64;
        let psi_bound = PI / (1u64 << (config.b_psi + 2)) as f64;
        for _ in 0..250 {
            let n_rows = rng.random_range(2..=4usize);
            let n_cols = rng.random_range(1..=n_rows);
            let v = random_orthonormal(&mut rng, n_rows, n_cols);
            let (phis, psis) = decompose_v_raw(&v).unwrap();
            let rebuilt = reconstruct_v_from_angles(n_rows, n_cols, &phis, &psis).unwrap();
            let aligned = align_last_row_phase(&v);
            let distance = rebuilt.max_distance(&aligned);
            worst_continuous = worst_continuous.max(distance);
            assert!(distance <= 1e-8, "continuous round-trip error {distance}");

            let quantized = quantize_angles(&phis, &psis, n_rows, n_cols, config).unwrap();
            let (qphis, qpsis) = dequantize_angles(&quantized);
            for (raw, q) in phis.iter().zip(&qphis) {
                let lin = (raw - q).abs();
                let err = lin.min(2.0 * PI - lin);
                assert!(err <= phi_bound + 1e-12, "phi error {err} > {phi_bound}");
            }
            for (raw, q) in psis.iter().zip(&qpsis) {
                assert!(
                    (raw - q).abs() <= psi_bound + 1e-12,
                    "psi error {} > {psi_bound}",
                    (raw - q).abs()
                );
            }
        }
    }
    println!(
        "ACCEPTANCE 1 PASS: codec round-trip exact on 1000 sets; continuous error <= {worst_continuous:.2e} (bound 1e-8); quantization within half-bin"
    );
}

#[test]
fn criterion_2_unitarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DEC);
    let mut worst = 0.0f64;
    for config in PRESETS {
        for _ in 0..250 {
            let set = random_angle_set(&mut rng, config);
            let v = reconstruct_v(&set);
            worst = worst.max(v.unitarity_residual());
        }
    }
    assert!(worst <= 1e-9, "unitarity residual {worst}");
    println!(
        "ACCEPTANCE 2 PASS: max ||V^H V - I|| = {worst:.2e} over 1000 reconstructions (bound 1e-9)"
    );
}

/// Independent oracle: explicit covariance, cyclic Jacobi, projection.
fn oracle_pca(x: &Array2<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = x.nrows();
    let f = x.ncols();
    let mut centered = x.clone();
    for mut col in centered.columns_mut() {
        let mean = col.sum() / n as f64;
        col.mapv_inplace(|v| v - mean);
    }
    let mut cov = Array2::<f64>::zeros((f, f));
    for a in 0..f {
        for b in 0..f {
            let mut s = 0.0;
            for r in 0..n {
                s += centered[[r, a]] * centered[[r, b]];
            }
            cov[[a, b]] = s / (n - 1) as f64;
        }
    }
    let mut m = cov;
    let mut vecs: Array2<f64> = Array2::eye(f);
    for _ in 0..300 {
        let mut off = 0.0f64;
        for p in 0..f {
            for q in (p + 1)..f {
                off += m[[p, q]] * m[[p, q]];
            }
        }
        if off.sqrt() < 1e-15 {
            break;
        }
        for p in 0..f {
            for q in (p + 1)..f {
                let apq = m[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[[q, q]] - m[[p, p]]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..f {
                    let mkp = m[[k, p]];
                    let mkq = m[[k, q]];
                    m[[k, p]] = c * mkp - s * mkq;
                    m[[k, q]] = s * mkp + c * mkq;
                }
                for k in 0..f {
                    let mpk = m[[p, k]];
                    let mqk = m[[q, k]];
                    m[[p, k]] = c * mpk - s * mqk;
                    m[[q, k]] = s * mpk + c * mqk;
                }
                for k in 0..f {
                    let vkp = vecs[[k, p]];
                    let vkq = vecs[[k, q]];
                    vecs[[k, p]] = c * vkp - s * vkq;
                    vecs[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..f).collect();
    order.sort_by(|&a, &b| m[[b, b]].total_cmp(&m[[a, a]]));
    let total: f64 = (0..f).map(|i| m[[i, i]].max(0.0)).sum();
    let rates: Vec<f64> = order.iter().map(|&i| m[[i, i]].max(0.0) / total).collect();
    let top = order[0];
    let scores: Vec<f64> = (0..n)
        .map(|r| (0..f).map(|c| centered[[r, c]] * vecs[[c, top]]).sum())
        .collect();
    (scores, rates)
}

#[test]
fn criterion_3_pca_matches_brute_force_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9CA);
    let mut worst_score = 0.0f64;
    let mut worst_rate = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(2..=20usize);
        let f = rng.random_range(1..=8usize);
        let x = Array2::from_shape_fn((n, f), |(r, c)| {
            ((r * 7 + c * 3) as f64 * 0.61).sin() + rng.random::<f64>()
        });
        let got = apply_pca(&FeatureMatrix {
            timestamps: (0..n).map(|i| i as f64).collect(),
            values: x.clone(),
        })
        .unwrap();
        let (oracle_scores, oracle_rates) = oracle_pca(&x);
        let dot: f64 = got
            .scores
            .iter()
            .zip(&oracle_scores)
            .map(|(a, b)| a * b)
            .sum();
        let flip = if dot < 0.0 { -1.0 } else { 1.0 };
        for (a, b) in got.scores.iter().zip(&oracle_scores) {
            worst_score = worst_score.max((a - flip * b).abs());
        }
        for (a, b) in got.contribution_rates.iter().zip(&oracle_rates) {
            worst_rate = worst_rate.max((a - b).abs());
        }
    }
    assert!(worst_score <= 1e-8, "score deviation {worst_score}");
    assert!(worst_rate <= 1e-10, "rate deviation {worst_rate}");
    println!(
        "ACCEPTANCE 3 PASS: PCA vs brute-force oracle on 200 matrices: scores within {worst_score:.2e} (1e-8), rates within {worst_rate:.2e} (1e-10)"
    );
}

#[test]
fn criterion_4_spectral_identity() {
    let cfg = PipelineConfig::default();
    let n = cfg.n_interp();
    assert_eq!(n, 600);
    let series = UniformSeries {
        values: (0..n)
            .map(|i| (2.0 * PI * 0.25 * (i as f64 * 0.1)).cos())
            .collect(),
        step: cfg.interp_interval,
        extrapolated: 0,
    };
    let spectrum = compute_spectrum(&series);
    let banded = band_pass(&spectrum, &cfg).unwrap();
    let estimate = detect_and_estimate(&banded, &cfg);
    assert!(estimate.detected);
    assert_eq!(estimate.rate, 15.0, "rate must be exactly 15");
    assert!(estimate.ratio >= 5.0);
    println!(
        "ACCEPTANCE 4 PASS: 15 breaths/minute sinusoid -> rate = {} exactly, ratio = {:.1} (>= 5)",
        estimate.rate, estimate.ratio
    );
}

fn reference_scenario(rate: f64, breathing_gain: f64, seed: u64) -> BreathingScenario {
    BreathingScenario {
        rate,
        duration: 300.0,
        feedback_interval_mean: 0.20,
        feedback_interval_jitter: 0.02,
        breathing_gain,
        noise_sigma: 0.05,
        seed,
        n_rows: 4,
        n_cols: 4,
        n_subcarriers: 250,
        config: QuantizationConfig::SU_FINE,
    }
}

#[test]
fn criterion_5_end_to_end_synthetic_rmse() {
    let cfg = PipelineConfig::default();
    let mut measured = Vec::new();
    for rate in [15.0, 20.0] {
        // breathing_gain / noise_sigma = 0.5 / 0.05 = 10
        let scenario = reference_scenario(rate, 0.5, 42);
        let stream = generate_capture(&scenario).unwrap();
        let estimates = sliding_estimate(&stream, &cfg).unwrap();
        assert_eq!(estimates.len(), 241, "expected 241 windows");
        let truth = ground_truth(&scenario, &cfg);
        let err = rmse(&estimates, &truth).unwrap();
        assert!(
            err <= 1.0,
            "rate {rate}: RMSE {err} exceeds one bin (1.0 breaths/minute)"
        );
        measured.push((rate, err));
    }
    println!(
        "ACCEPTANCE 5 PASS: full-scale RMSE over 241 windows: rate 15 -> {:.4}, rate 20 -> {:.4} (bound 1.0)",
        measured[0].1, measured[1].1
    );
}

#[test]
fn criterion_6_breath_hold() {
    let cfg = PipelineConfig::default();
    let scenario = reference_scenario(0.0, 0.0, 42);
    let stream = generate_capture(&scenario).unwrap();
    let estimates = sliding_estimate(&stream, &cfg).unwrap();
    assert_eq!(estimates.len(), 241);
    let zero_rate = estimates.iter().filter(|e| e.rate == 0.0).count();
    let fraction = zero_rate as f64 / estimates.len() as f64;
    assert!(
        fraction >= 0.95,
        "only {zero_rate}/241 windows reported rate 0"
    );
    println!(
        "ACCEPTANCE 6 PASS: breath hold -> {zero_rate}/241 windows at rate 0 ({:.1}% >= 95%)",
        fraction * 100.0
    );
}

#[test]
fn criterion_7_degraded_snr_trend() {
    let cfg = PipelineConfig::default();
    let noise = 0.05;
    let ratios = [10.0, 1.0, 0.1];
    let mut per_seed = Vec::new();
    for seed in 1..=5u64 {
        let errs: Vec<f64> = ratios
            .iter()
            .map(|&ratio| {
                let scenario = BreathingScenario {
                    rate: 15.0,
                    duration: 90.0,
                    feedback_interval_mean: 0.25,
                    feedback_interval_jitter: 0.02,
                    breathing_gain: ratio * noise,
                    noise_sigma: noise,
                    seed,
                    n_rows: 4,
                    n_cols: 4,
                    n_subcarriers: 32,
                    config: QuantizationConfig::SU_FINE,
                };
                let stream = generate_capture(&scenario).unwrap();
                let estimates = sliding_estimate(&stream, &cfg).unwrap();
                rmse(&estimates, &ground_truth(&scenario, &cfg)).unwrap()
            })
            .collect();
        assert!(
            errs[0] <= errs[1] + 1e-12 && errs[1] <= errs[2] + 1e-12,
            "seed {seed}: RMSE not monotone over gain/noise {{10, 1, 0.1}}: {errs:?}"
        );
        per_seed.push(errs);
    }
    println!("ACCEPTANCE 7 PASS: RMSE non-decreasing as gain/noise falls 10 -> 1 -> 0.1 for all 5 seeds: {per_seed:?}");
}

#[test]
fn criterion_8_parser_robustness() {
    // Golden pcap decodes to the exact committed dump.
    let pcap_bytes = std::fs::read(testdata("golden.pcap")).unwrap();
    let stream = read_pcap_bytes(&pcap_bytes, &MacFilter::any()).unwrap();
    assert_eq!(stream.records.len(), 10);
    let mut dump = Vec::new();
    write_fixture_to(&stream, &mut dump).unwrap();
    let committed = std::fs::read(testdata("golden_angles.jsonl")).unwrap();
    assert_eq!(dump, committed, "golden pcap dump diverged");

    // 10,000 byte mutations: clean errors or skips, never a panic.
    let mut rng = ChaCha8Rng::seed_from_u64(0xF0221);
    for _ in 0..10_000 {
        let mut mutated = pcap_bytes.clone();
        for _ in 0..rng.random_range(1..=8usize) {
            let at = rng.random_range(0..mutated.len());
            mutated[at] = rng.random();
        }
        let _ = read_pcap_bytes(&mutated, &MacFilter::any());
    }

    // Fixture round-trip identity on 100 random streams.
    for _ in 0..100 {
        let config = PRESETS[rng.random_range(0..PRESETS.len())];
        let n_frames = rng.random_range(1..=6usize);
        let n_sc = rng.random_range(1..=5usize);
        let n_rows = rng.random_range(2..=4usize);
        let n_cols = rng.random_range(1..=n_rows);
        let pairs = angle_pair_count(n_rows, n_cols);
        let mut t = 0.0;
        let records: Vec<BfmFrameRecord> = (0..n_frames)
            .map(|_| {
                t += rng.random::<f64>() + 1e-3;
                let sets: Vec<AngleSet> = (0..n_sc)
                    .map(|_| {
                        let phis = (0..pairs)
                            .map(|_| rng.random_range(0..=config.max_phi_index()))
                            .collect();
                        let psis = (0..pairs)
                            .map(|_| rng.random_range(0..=config.max_psi_index()))
                            .collect();
                        AngleSet::new(n_rows, n_cols, phis, psis, config).unwrap()
                    })
                    .collect();
                BfmFrameRecord::new(
                    t,
                    bfm_capture::DEFAULT_SOURCE_MAC,
                    bfm_capture::DEFAULT_DEST_MAC,
                    sets,
                )
                .unwrap()
            })
            .collect();
        let stream = CaptureStream::new(records, StreamMetadata::default());
        let mut bytes = Vec::new();
        write_fixture_to(&stream, &mut bytes).unwrap();
        let path = std::env::temp_dir().join(format!(
            "bfm-acceptance-rt-{}-{}.jsonl",
            std::process::id(),
            rng.random::<u32>()
        ));
        std::fs::write(&path, &bytes).unwrap();
        let back = bfm_capture::read_fixture(&path).unwrap();
        std::fs::remove_file(&path).ok();
        assert_eq!(back.records.len(), stream.records.len());
        for (a, b) in stream.records.iter().zip(&back.records) {
            assert_eq!(a.angle_sets, b.angle_sets, "indices must be bit-exact");
            assert!((a.timestamp - b.timestamp).abs() < 1e-9);
        }
    }
    println!("ACCEPTANCE 8 PASS: golden dump exact; 10000 mutations without a crash; 100 fixture round-trips identical");
}

#[test]
fn criterion_9_window_and_feature_arithmetic() {
    let cfg = PipelineConfig::default();

    // A real 300 s capture at default settings yields exactly 241 windows.
    let scenario = BreathingScenario {
        rate: 15.0,
        duration: 300.0,
        feedback_interval_mean: 0.20,
        feedback_interval_jitter: 0.02,
        breathing_gain: 0.5,
        noise_sigma: 0.05,
        seed: 9,
        n_rows: 2,
        n_cols: 1,
        n_subcarriers: 1,
        config: QuantizationConfig::SU_FINE,
    };
    let stream = generate_capture(&scenario).unwrap();
    let estimates = sliding_estimate(&stream, &cfg).unwrap();
    assert_eq!(estimates.len(), 241);
    assert_eq!(estimates[240].window_start, 240.0);
    assert_eq!(window_count(60.0, &cfg), 1);
    assert_eq!(window_count(59.0, &cfg), 0);

    // 4x4 with 250 subcarriers arranges into 4000 feature columns.
    let config = QuantizationConfig::SU_FINE;
    let set = AngleSet::new(4, 4, vec![0; 6], vec![0; 6], config).unwrap();
    let sets: Vec<AngleSet> = (0..250).map(|_| set.clone()).collect();
    let frame = BfmFrameRecord::new(
        0.0,
        bfm_capture::DEFAULT_SOURCE_MAC,
        bfm_capture::DEFAULT_DEST_MAC,
        sets,
    )
    .unwrap();
    let features = build_feature_matrix(&[frame]).unwrap();
    assert_eq!(features.n_features(), 4000);
    println!("ACCEPTANCE 9 PASS: 300 s -> 241 windows; 4*4*250 -> 4000 feature columns");
}
