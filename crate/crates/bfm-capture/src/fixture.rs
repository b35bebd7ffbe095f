//! Line-delimited JSON fixture format.
//!
//! Line 1 is a header object:
//! `{"format":"bfm-fixture/1","n_rows":..,"n_cols":..,"b_phi":..,"b_psi":..,
//!   "n_subcarriers":..,"duration":..}`
//! Each following line is one frame:
//! `{"t":seconds,"phi":[[per-subcarrier indices]..],"psi":[[..]..]}`
//! with the outer arrays of length `n_subcarriers` and inner arrays in the
//! angle-set ordering. `duration` records the capture session length so a
//! re-read stream windows identically; readers fall back to the last
//! timestamp when it is absent.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use bfm_codec::{AngleSet, QuantizationConfig};
use serde::{Deserialize, Serialize};

use crate::error::CaptureError;
use crate::record::{BfmFrameRecord, CaptureStream, MacAddr, StreamMetadata};

pub const FIXTURE_FORMAT: &str = "bfm-fixture/1";

/// Placeholder endpoints for sources that carry no addressing (fixtures).
pub const DEFAULT_SOURCE_MAC: MacAddr = [0x02, 0, 0, 0, 0, 0x01];
pub const DEFAULT_DEST_MAC: MacAddr = [0x02, 0, 0, 0, 0, 0x02];

#[derive(Debug, Serialize, Deserialize)]
struct FixtureHeader {
    format: String,
    n_rows: usize,
    n_cols: usize,
    b_phi: u8,
    b_psi: u8,
    n_subcarriers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    duration: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FixtureLine {
    t: f64,
    phi: Vec<Vec<u16>>,
    psi: Vec<Vec<u16>>,
}

fn parse_err(line: usize, message: impl Into<String>) -> CaptureError {
    CaptureError::FixtureParse {
        line,
        message: message.into(),
    }
}

pub fn write_fixture(stream: &CaptureStream, path: &Path) -> Result<(), CaptureError> {
    let file = File::create(path).map_err(|e| CaptureError::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_fixture_to(stream, &mut out)?;
    out.flush().map_err(|e| CaptureError::io(path, e))
}

pub fn write_fixture_to<W: Write>(stream: &CaptureStream, out: &mut W) -> Result<(), CaptureError> {
    let header = match stream.records.first() {
        Some(first) => FixtureHeader {
            format: FIXTURE_FORMAT.to_string(),
            n_rows: first.n_rows,
            n_cols: first.n_cols,
            b_phi: first.config().b_phi,
            b_psi: first.config().b_psi,
            n_subcarriers: first.n_subcarriers,
            duration: Some(stream.duration()),
        },
        None => FixtureHeader {
            format: FIXTURE_FORMAT.to_string(),
            n_rows: 0,
            n_cols: 0,
            b_phi: 1,
            b_psi: 1,
            n_subcarriers: 0,
            duration: Some(stream.duration()),
        },
    };
    let io_err = |e: std::io::Error| CaptureError::Io {
        path: "<writer>".to_string(),
        source: e,
    };
    serde_json::to_writer(&mut *out, &header).map_err(|e| io_err(e.into()))?;
    out.write_all(b"\n").map_err(io_err)?;
    for record in &stream.records {
        let line = FixtureLine {
            t: record.timestamp,
            phi: record
                .angle_sets
                .iter()
                .map(|s| s.phi_indices().to_vec())
                .collect(),
            psi: record
                .angle_sets
                .iter()
                .map(|s| s.psi_indices().to_vec())
                .collect(),
        };
        serde_json::to_writer(&mut *out, &line).map_err(|e| io_err(e.into()))?;
        out.write_all(b"\n").map_err(io_err)?;
    }
    Ok(())
}

pub fn read_fixture(path: &Path) -> Result<CaptureStream, CaptureError> {
    let file = File::open(path).map_err(|e| CaptureError::io(path, e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines().enumerate();

    let (_, header_line) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file, expected header"))?;
    let header_line = header_line.map_err(|e| CaptureError::io(path, e))?;
    let header: FixtureHeader =
        serde_json::from_str(&header_line).map_err(|e| parse_err(1, format!("bad header: {e}")))?;
    if header.format != FIXTURE_FORMAT {
        return Err(parse_err(
            1,
            format!(
                "unknown format {:?}, expected {FIXTURE_FORMAT:?}",
                header.format
            ),
        ));
    }

    let mut records = Vec::new();
    let mut config = None;
    for (index, line) in lines {
        let line_no = index + 1;
        let line = line.map_err(|e| CaptureError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: FixtureLine = serde_json::from_str(&line)
            .map_err(|e| parse_err(line_no, format!("bad record: {e}")))?;
        if parsed.phi.len() != header.n_subcarriers {
            return Err(parse_err(
                line_no,
                format!(
                    "field phi has {} subcarriers, header says {}",
                    parsed.phi.len(),
                    header.n_subcarriers
                ),
            ));
        }
        if parsed.psi.len() != header.n_subcarriers {
            return Err(parse_err(
                line_no,
                format!(
                    "field psi has {} subcarriers, header says {}",
                    parsed.psi.len(),
                    header.n_subcarriers
                ),
            ));
        }
        if !parsed.t.is_finite() {
            return Err(parse_err(line_no, "field t is not finite"));
        }
        let cfg = *config.get_or_insert_with(|| {
            QuantizationConfig::new(header.b_phi, header.b_psi).unwrap_or_default()
        });
        if QuantizationConfig::new(header.b_phi, header.b_psi).is_err() {
            return Err(parse_err(line_no, "header bit widths are invalid"));
        }
        let mut sets = Vec::with_capacity(header.n_subcarriers);
        for (sc, (phis, psis)) in parsed.phi.into_iter().zip(parsed.psi).enumerate() {
            let set = AngleSet::new(header.n_rows, header.n_cols, phis, psis, cfg)
                .map_err(|e| parse_err(line_no, format!("subcarrier {sc}: {e}")))?;
            sets.push(set);
        }
        let record = BfmFrameRecord::new(parsed.t, DEFAULT_SOURCE_MAC, DEFAULT_DEST_MAC, sets)
            .map_err(|e| parse_err(line_no, e.to_string()))?;
        records.push(record);
    }

    let metadata = StreamMetadata {
        source: path.display().to_string(),
        parsed: records.len(),
        duration: header.duration.unwrap_or(0.0),
        ..StreamMetadata::default()
    };
    Ok(CaptureStream::new(records, metadata))
}
