use std::collections::BTreeMap;

use bfm_codec::{AngleSet, QuantizationConfig};
use serde::Serialize;

use crate::error::CaptureError;

pub type MacAddr = [u8; 6];

/// One captured feedback frame: a timestamp plus one angle set per
/// subcarrier, in ascending subcarrier order.
#[derive(Debug, Clone, PartialEq)]
pub struct BfmFrameRecord {
    pub timestamp: f64,
    pub source: MacAddr,
    pub dest: MacAddr,
    pub n_rows: usize,
    pub n_cols: usize,
    pub n_subcarriers: usize,
    pub angle_sets: Vec<AngleSet>,
}

impl BfmFrameRecord {
    pub fn new(
        timestamp: f64,
        source: MacAddr,
        dest: MacAddr,
        angle_sets: Vec<AngleSet>,
    ) -> Result<Self, CaptureError> {
        let first = angle_sets
            .first()
            .ok_or(CaptureError::SubcarrierCountMismatch {
                expected: 1,
                actual: 0,
            })?;
        let (n_rows, n_cols, config) = (first.n_rows(), first.n_cols(), *first.config());
        for (index, set) in angle_sets.iter().enumerate() {
            if set.n_rows() != n_rows || set.n_cols() != n_cols || *set.config() != config {
                return Err(CaptureError::InhomogeneousRecord { index });
            }
        }
        Ok(Self {
            timestamp,
            source,
            dest,
            n_rows,
            n_cols,
            n_subcarriers: angle_sets.len(),
            angle_sets,
        })
    }

    pub fn config(&self) -> &QuantizationConfig {
        self.angle_sets[0].config()
    }
}

/// Why a packet was skipped while reading a capture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SkipReason {
    TruncatedPacket,
    NotManagement,
    NotActionFrame,
    NotVhtBeamforming,
    MacFiltered,
    BadDimensions,
    TruncatedReport,
}

impl std::fmt::Display for SkipReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SkipReason::TruncatedPacket => "truncated_packet",
            SkipReason::NotManagement => "not_management",
            SkipReason::NotActionFrame => "not_action_frame",
            SkipReason::NotVhtBeamforming => "not_vht_beamforming",
            SkipReason::MacFiltered => "mac_filtered",
            SkipReason::BadDimensions => "bad_dimensions",
            SkipReason::TruncatedReport => "truncated_report",
        };
        f.write_str(s)
    }
}

/// Bookkeeping for a parsed capture.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StreamMetadata {
    /// Where the stream came from (file path or "synth").
    pub source: String,
    /// Frames successfully decoded.
    pub parsed: usize,
    /// Packets or lines that could not be decoded.
    pub skipped: usize,
    /// Breakdown of skip reasons.
    pub skip_reasons: BTreeMap<String, usize>,
    /// Length of the capture session in seconds. At least the last record
    /// timestamp; generators that know their session length set it exactly.
    pub duration: f64,
    /// Total sub-subcarrier trailing bits ignored across all reports.
    pub trailing_bits: usize,
}

impl StreamMetadata {
    pub fn count_skip(&mut self, reason: SkipReason) {
        self.skipped += 1;
        *self.skip_reasons.entry(reason.to_string()).or_insert(0) += 1;
    }

    pub fn skip_summary(&self) -> String {
        if self.skip_reasons.is_empty() {
            return "none".to_string();
        }
        self.skip_reasons
            .iter()
            .map(|(reason, count)| format!("{reason}={count}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// An ordered sequence of feedback frames plus parse bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptureStream {
    pub records: Vec<BfmFrameRecord>,
    pub metadata: StreamMetadata,
}

impl CaptureStream {
    /// Build a stream from records, sorting by timestamp and filling the
    /// session duration from the last record when the caller did not set a
    /// longer one.
    pub fn new(mut records: Vec<BfmFrameRecord>, mut metadata: StreamMetadata) -> Self {
        records.sort_by(|a, b| a.timestamp.total_cmp(&b.timestamp));
        let last = records.last().map(|r| r.timestamp).unwrap_or(0.0);
        if metadata.duration < last {
            metadata.duration = last;
        }
        metadata.parsed = records.len();
        Self { records, metadata }
    }

    pub fn duration(&self) -> f64 {
        self.metadata.duration
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }
}

/// Source/destination allowlists for pcap ingest. `None` accepts any
/// address.
#[derive(Debug, Clone, Default)]
pub struct MacFilter {
    pub sources: Option<Vec<MacAddr>>,
    pub dests: Option<Vec<MacAddr>>,
}

impl MacFilter {
    pub fn any() -> Self {
        Self::default()
    }

    pub fn accepts(&self, source: &MacAddr, dest: &MacAddr) -> bool {
        let src_ok = self
            .sources
            .as_ref()
            .is_none_or(|list| list.contains(source));
        let dst_ok = self.dests.as_ref().is_none_or(|list| list.contains(dest));
        src_ok && dst_ok
    }
}

/// Parse "aa:bb:cc:dd:ee:ff" into a MAC address.
pub fn parse_mac(s: &str) -> Option<MacAddr> {
    let mut out = [0u8; 6];
    let mut parts = s.split(':');
    for slot in out.iter_mut() {
        *slot = u8::from_str_radix(parts.next()?, 16).ok()?;
    }
    if parts.next().is_some() {
        return None;
    }
    Some(out)
}

pub fn format_mac(mac: &MacAddr) -> String {
    mac.iter()
        .map(|b| format!("{b:02x}"))
        .collect::<Vec<_>>()
        .join(":")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mac_parse_and_format() {
        let mac = parse_mac("02:00:00:00:00:01").unwrap();
        assert_eq!(mac, [2, 0, 0, 0, 0, 1]);
        assert_eq!(format_mac(&mac), "02:00:00:00:00:01");
        assert!(parse_mac("02:00").is_none());
        assert!(parse_mac("zz:00:00:00:00:01").is_none());
    }

    #[test]
    fn filter_accepts_and_rejects() {
        let a = [1u8; 6];
        let b = [2u8; 6];
        assert!(MacFilter::any().accepts(&a, &b));
        let f = MacFilter {
            sources: Some(vec![a]),
            dests: None,
        };
        assert!(f.accepts(&a, &b));
        assert!(!f.accepts(&b, &a));
    }

    #[test]
    fn stream_sorts_records() {
        let cfg = bfm_codec::QuantizationConfig::SU_COARSE;
        let set = bfm_codec::AngleSet::new(2, 1, vec![0], vec![0], cfg).unwrap();
        let rec = |t: f64| BfmFrameRecord::new(t, [0; 6], [1; 6], vec![set.clone()]).unwrap();
        let stream = CaptureStream::new(vec![rec(2.0), rec(0.5)], StreamMetadata::default());
        assert_eq!(stream.records[0].timestamp, 0.5);
        assert_eq!(stream.duration(), 2.0);
    }
}
