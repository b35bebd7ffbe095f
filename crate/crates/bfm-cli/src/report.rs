//! Machine-readable run outputs: the JSON run report, CSV rows and the
//! per-frame matrix dump.

use anyhow::{bail, Context, Result};
use bfm_capture::{CaptureStream, StreamMetadata};
use bfm_codec::reconstruct_v;
use bfm_pipeline::{PipelineConfig, RespirationEstimate, Spectrum};
use serde::Serialize;

/// Everything one estimation run produces; the config echo plus the input
/// description reproduce the run exactly.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub input: String,
    pub format: String,
    pub config: PipelineConfig,
    pub stream: StreamMetadata,
    pub windows: Vec<RespirationEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rmse: Option<f64>,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("window_start,detected,rate,ratio,flags\n");
        for w in &self.windows {
            let flags = w
                .flags
                .iter()
                .map(|f| {
                    serde_json::to_value(f)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default()
                })
                .collect::<Vec<_>>()
                .join("|");
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                w.window_start, w.detected, w.rate, w.ratio, flags
            ));
        }
        out
    }
}

/// Plot-ready spectrum rows.
pub fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::from("breaths_per_minute,magnitude\n");
    for (k, mag) in s.magnitudes.iter().enumerate() {
        out.push_str(&format!("{},{}\n", s.frequency(k), mag));
    }
    out
}

/// One decompressed frame as nested JSON: subcarrier -> row -> [re, im].
#[derive(Debug, Serialize)]
pub struct FrameDump {
    pub frame: usize,
    pub timestamp: f64,
    pub n_rows: usize,
    pub n_cols: usize,
    pub n_subcarriers: usize,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn dump_frame(stream: &CaptureStream, frame: usize) -> Result<FrameDump> {
    let record = stream.records.get(frame).with_context(|| {
        format!(
            "frame index {frame} out of range; capture holds {} frames",
            stream.records.len()
        )
    })?;
    let matrices = record
        .angle_sets
        .iter()
        .map(|set| {
            let v = reconstruct_v(set);
            (0..v.n_rows())
                .map(|r| {
                    (0..v.n_cols())
                        .map(|c| {
                            let z = v.entries()[(r, c)];
                            [z.re, z.im]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(FrameDump {
        frame,
        timestamp: record.timestamp,
        n_rows: record.n_rows,
        n_cols: record.n_cols,
        n_subcarriers: record.n_subcarriers,
        matrices,
    })
}

/// Parse a ground-truth file: CSV lines `window_start,rate`, optional
/// header, '#' comments allowed.
pub fn parse_truth(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if i == 0 && line.chars().next().is_some_and(|c| c.is_alphabetic()) {
            continue; // header
        }
        let mut parts = line.split(',');
        let start: f64 = parts
            .next()
            .with_context(|| format!("truth line {}: missing window_start", i + 1))?
            .trim()
            .parse()
            .with_context(|| format!("truth line {}: bad window_start", i + 1))?;
        let rate: f64 = parts
            .next()
            .with_context(|| format!("truth line {}: missing rate", i + 1))?
            .trim()
            .parse()
            .with_context(|| format!("truth line {}: bad rate", i + 1))?;
        if parts.next().is_some() {
            bail!("truth line {}: expected exactly two columns", i + 1);
        }
        out.push((start, rate));
    }
    Ok(out)
}
