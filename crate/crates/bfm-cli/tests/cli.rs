//! End-to-end command-line behavior: exit codes, output shapes and
//! byte-stability.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bfmresp"))
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("bfmresp-cli-{}-{name}", std::process::id()))
}

/// A quick, strongly breathing fixture: 65 s of a 2x2 link at 18
/// breaths/minute.
fn small_fixture() -> PathBuf {
    let path = tmp("small.jsonl");
    if !path.exists() {
        let status = bin()
            .args([
                "synth",
                "--rate",
                "18",
                "--duration",
                "65",
                "--interval",
                "0.25",
                "--jitter",
                "0",
                "--rows",
                "2",
                "--cols",
                "2",
                "--subcarriers",
                "8",
                "--seed",
                "7",
                "--out",
            ])
            .arg(&path)
            .status()
            .unwrap();
        assert!(status.success());
    }
    path
}

fn run_ok(args: &[&str], extra: &[&PathBuf]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    for p in extra {
        cmd.arg(p);
    }
    let output = cmd.output().unwrap();
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

#[test]
fn estimate_json_report_is_complete_and_stable() {
    let fixture = small_fixture();
    let out1 = run_ok(&["estimate", "--input"], &[&fixture]);
    let out2 = run_ok(&["estimate", "--input"], &[&fixture]);
    assert_eq!(out1.stdout, out2.stdout, "report must be byte-stable");

    let report: serde_json::Value = serde_json::from_slice(&out1.stdout).unwrap();
    assert_eq!(report["format"], "fixture");
    assert_eq!(report["config"]["theta"], 5.0);
    assert_eq!(report["stream"]["parsed"], 260);
    let windows = report["windows"].as_array().unwrap();
    assert_eq!(windows.len(), 6); // 65 s -> starts 0..=5
    for w in windows {
        assert_eq!(w["detected"], true);
        assert_eq!(w["rate"], 18.0);
    }
    assert!(report.get("rmse").is_none());
}

#[test]
fn estimate_csv_has_one_row_per_window() {
    let fixture = small_fixture();
    let out = run_ok(&["estimate", "--csv", "--input"], &[&fixture]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "window_start,detected,rate,ratio,flags");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("0,true,18,"));
}

#[test]
fn estimate_with_truth_reports_rmse() {
    let fixture = small_fixture();
    let truth = tmp("truth.csv");
    std::fs::write(
        &truth,
        "window_start,rate\n0,18\n1,18\n2,18\n3,18\n4,18\n5,18\n",
    )
    .unwrap();
    let out = bin()
        .args(["estimate", "--input"])
        .arg(&fixture)
        .arg("--truth")
        .arg(&truth)
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["rmse"], 0.0);
}

#[test]
fn missing_input_fails_without_output() {
    let out = bin()
        .args(["estimate", "--input", "/nonexistent/capture.jsonl"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(out.stdout.is_empty(), "no partial output on failure");
    assert!(!out.stderr.is_empty());
}

#[test]
fn out_file_not_created_on_failure() {
    let target = tmp("never-written.json");
    let out = bin()
        .args(["estimate", "--input", "/nonexistent/capture.jsonl", "--out"])
        .arg(&target)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(!target.exists());
}

#[test]
fn decode_rejects_out_of_range_frame() {
    let fixture = small_fixture();
    let out = bin()
        .args(["decode", "--frame", "100000", "--input"])
        .arg(&fixture)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
}

#[test]
fn decode_output_is_unitary() {
    let fixture = small_fixture();
    let out = run_ok(&["decode", "--frame", "3", "--input"], &[&fixture]);
    let dump: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let matrices = dump["matrices"].as_array().unwrap();
    assert_eq!(matrices.len(), 8);
    // Check column orthonormality of the first subcarrier numerically.
    let m = &matrices[0];
    let entry = |r: usize, c: usize| -> (f64, f64) {
        (m[r][c][0].as_f64().unwrap(), m[r][c][1].as_f64().unwrap())
    };
    for a in 0..2 {
        for b in 0..2 {
            let mut re = 0.0;
            let mut im = 0.0;
            for r in 0..2 {
                let (ar, ai) = entry(r, a);
                let (br, bi) = entry(r, b);
                re += ar * br + ai * bi;
                im += ar * bi - ai * br;
            }
            let expect = if a == b { 1.0 } else { 0.0 };
            assert!((re - expect).abs() < 1e-9 && im.abs() < 1e-9);
        }
    }
}

#[test]
fn spectrum_emits_301_default_bins() {
    let fixture = small_fixture();
    let out = run_ok(&["spectrum", "--window-start", "0", "--input"], &[&fixture]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "breaths_per_minute,magnitude");
    assert_eq!(lines.len(), 302);
}

#[test]
fn spectrum_band_passed_zeroes_out_of_band() {
    let fixture = small_fixture();
    let out = run_ok(
        &[
            "spectrum",
            "--window-start",
            "0",
            "--band-passed",
            "--input",
        ],
        &[&fixture],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let mut parts = line.split(',');
        let freq: f64 = parts.next().unwrap().parse().unwrap();
        let mag: f64 = parts.next().unwrap().parse().unwrap();
        if !(10.0..=50.0).contains(&freq) {
            assert_eq!(mag, 0.0, "bin at {freq} not zeroed");
        }
    }
}

#[test]
fn spectrum_peak_sits_at_synth_rate() {
    let fixture = small_fixture();
    let out = run_ok(
        &[
            "spectrum",
            "--window-start",
            "2",
            "--band-passed",
            "--input",
        ],
        &[&fixture],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let peak = text
        .lines()
        .skip(1)
        .map(|l| {
            let mut p = l.split(',');
            let f: f64 = p.next().unwrap().parse().unwrap();
            let m: f64 = p.next().unwrap().parse().unwrap();
            (f, m)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert_eq!(peak.0, 18.0);
}

#[test]
fn spectrum_rejects_out_of_range_window() {
    let fixture = small_fixture();
    let out = bin()
        .args(["spectrum", "--window-start", "500", "--input"])
        .arg(&fixture)
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn config_file_applies_and_flags_override() {
    let fixture = small_fixture();
    let cfg_path = tmp("config.json");
    std::fs::write(&cfg_path, r#"{"theta": 2.0, "band_high": 40.0}"#).unwrap();
    let out = bin()
        .args(["estimate", "--input"])
        .arg(&fixture)
        .arg("--config")
        .arg(&cfg_path)
        .args(["--theta", "7.5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["theta"], 7.5); // flag wins
    assert_eq!(report["config"]["band_high"], 40.0); // file beats default
}

#[test]
fn synth_pcap_round_trips_through_estimate() {
    let pcap = tmp("loop.pcap");
    let status = bin()
        .args([
            "synth",
            "--rate",
            "12",
            "--duration",
            "62",
            "--interval",
            "0.25",
            "--jitter",
            "0",
            "--rows",
            "3",
            "--cols",
            "2",
            "--subcarriers",
            "4",
            "--seed",
            "3",
            "--format",
            "pcap",
            "--out",
        ])
        .arg(&pcap)
        .status()
        .unwrap();
    assert!(status.success());
    let out = run_ok(&["estimate", "--input"], &[&pcap]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["format"], "pcap");
    let windows = report["windows"].as_array().unwrap();
    // pcap carries no session duration; the last frame lands at 61.75 s.
    assert_eq!(windows.len(), 2);
    for w in windows {
        assert_eq!(w["rate"], 12.0);
    }
}

#[test]
fn bad_config_value_is_rejected() {
    let fixture = small_fixture();
    let out = bin()
        .args(["estimate", "--band-low", "0", "--input"])
        .arg(&fixture)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("band"));
}
