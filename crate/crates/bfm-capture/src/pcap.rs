//! Classic pcap ingest for radiotap-encapsulated VHT compressed
//! beamforming action frames, plus a minimal writer used to ship parser
//! fixtures.
//!
//! Only classic pcap (not pcapng) with link type 127 (radiotap) is
//! understood. Both file endiannesses and both the microsecond and
//! nanosecond timestamp variants are accepted. All slice accesses are
//! bounds-checked; malformed packets are skipped and counted, never fatal.

use std::path::Path;

use bfm_codec::QuantizationConfig;

use crate::error::CaptureError;
use crate::record::{
    BfmFrameRecord, CaptureStream, MacAddr, MacFilter, SkipReason, StreamMetadata,
};
use crate::unpack::{pack_angle_bitstream, unpack_angle_bitstream};

const MAGIC_US: u32 = 0xA1B2_C3D4;
const MAGIC_NS: u32 = 0xA1B2_3C4D;
const DLT_RADIOTAP: u32 = 127;

const FC_SUBTYPE_ACTION: u8 = 13;
const FC_SUBTYPE_ACTION_NO_ACK: u8 = 14;
const CATEGORY_VHT: u8 = 21;
const VHT_ACTION_COMPRESSED_BF: u8 = 0;

#[derive(Clone, Copy)]
struct PcapFormat {
    big_endian: bool,
    nanos: bool,
}

fn read_u16(bytes: &[u8], at: usize, be: bool) -> Option<u16> {
    let raw: [u8; 2] = bytes.get(at..at + 2)?.try_into().ok()?;
    Some(if be {
        u16::from_be_bytes(raw)
    } else {
        u16::from_le_bytes(raw)
    })
}

fn read_u32(bytes: &[u8], at: usize, be: bool) -> Option<u32> {
    let raw: [u8; 4] = bytes.get(at..at + 4)?.try_into().ok()?;
    Some(if be {
        u32::from_be_bytes(raw)
    } else {
        u32::from_le_bytes(raw)
    })
}

fn parse_global_header(bytes: &[u8]) -> Result<PcapFormat, CaptureError> {
    let magic = read_u32(bytes, 0, false).ok_or_else(|| CaptureError::PcapHeader {
        message: "file shorter than a pcap global header".to_string(),
    })?;
    let format = match magic {
        MAGIC_US => PcapFormat {
            big_endian: false,
            nanos: false,
        },
        MAGIC_NS => PcapFormat {
            big_endian: false,
            nanos: true,
        },
        m if m == MAGIC_US.swap_bytes() => PcapFormat {
            big_endian: true,
            nanos: false,
        },
        m if m == MAGIC_NS.swap_bytes() => PcapFormat {
            big_endian: true,
            nanos: true,
        },
        other => {
            return Err(CaptureError::PcapHeader {
                message: format!("unrecognized magic 0x{other:08X}"),
            })
        }
    };
    if bytes.len() < 24 {
        return Err(CaptureError::PcapHeader {
            message: "file shorter than a pcap global header".to_string(),
        });
    }
    let network = read_u32(bytes, 20, format.big_endian).unwrap();
    if network != DLT_RADIOTAP {
        return Err(CaptureError::PcapHeader {
            message: format!("link type {network}, expected {DLT_RADIOTAP} (radiotap)"),
        });
    }
    Ok(format)
}

struct ParsedFrame {
    source: MacAddr,
    dest: MacAddr,
    angle_sets: Vec<bfm_codec::AngleSet>,
    trailing_bits: usize,
}

/// Dissect a single radiotap-encapsulated packet down to its angle sets.
fn parse_packet(data: &[u8], filter: &MacFilter) -> Result<ParsedFrame, SkipReason> {
    // Radiotap: skip using the little-endian length at byte offset 2.
    let rt_len = read_u16(data, 2, false).ok_or(SkipReason::TruncatedPacket)? as usize;
    if rt_len < 8 || rt_len > data.len() {
        return Err(SkipReason::TruncatedPacket);
    }
    let dot11 = &data[rt_len..];

    // Management header: frame control, duration, three addresses, sequence.
    if dot11.len() < 24 {
        return Err(SkipReason::TruncatedPacket);
    }
    let fc0 = dot11[0];
    let frame_type = (fc0 >> 2) & 0b11;
    let subtype = fc0 >> 4;
    if frame_type != 0 {
        return Err(SkipReason::NotManagement);
    }
    if subtype != FC_SUBTYPE_ACTION && subtype != FC_SUBTYPE_ACTION_NO_ACK {
        return Err(SkipReason::NotActionFrame);
    }
    let dest: MacAddr = dot11[4..10].try_into().unwrap();
    let source: MacAddr = dot11[10..16].try_into().unwrap();
    if !filter.accepts(&source, &dest) {
        return Err(SkipReason::MacFiltered);
    }

    let body = &dot11[24..];
    if body.len() < 5 {
        return Err(SkipReason::TruncatedPacket);
    }
    if body[0] != CATEGORY_VHT || body[1] != VHT_ACTION_COMPRESSED_BF {
        return Err(SkipReason::NotVhtBeamforming);
    }

    // VHT MIMO control: 3 bytes, little-endian bit order.
    let mimo = u32::from(body[2]) | u32::from(body[3]) << 8 | u32::from(body[4]) << 16;
    let n_cols = (mimo & 0b111) as usize + 1;
    let n_rows = ((mimo >> 3) & 0b111) as usize + 1;
    let _channel_width = (mimo >> 6) & 0b11;
    let _grouping = (mimo >> 8) & 0b11;
    let codebook = (mimo >> 10) & 1 == 1;
    let mu = (mimo >> 11) & 1 == 1;
    if n_rows < 2 || n_cols > n_rows {
        return Err(SkipReason::BadDimensions);
    }
    let config = QuantizationConfig::from_preset_bits(mu, codebook);

    // Skip one average-SNR byte per column, then the report follows.
    let report_start = 5 + n_cols;
    if body.len() < report_start {
        return Err(SkipReason::TruncatedPacket);
    }
    let report = &body[report_start..];
    let unpacked = unpack_angle_bitstream(report, n_rows, n_cols, config)
        .map_err(|_| SkipReason::TruncatedReport)?;

    Ok(ParsedFrame {
        source,
        dest,
        angle_sets: unpacked.angle_sets,
        trailing_bits: unpacked.trailing_bits,
    })
}

/// Read a capture file, keeping only decodable VHT compressed beamforming
/// frames that pass `filter`. Timestamps are normalized to seconds since
/// the first accepted frame.
pub fn read_pcap(path: &Path, filter: &MacFilter) -> Result<CaptureStream, CaptureError> {
    let bytes = std::fs::read(path).map_err(|e| CaptureError::io(path, e))?;
    let stream = read_pcap_bytes(&bytes, filter)?;
    let mut stream = stream;
    stream.metadata.source = path.display().to_string();
    Ok(stream)
}

/// In-memory variant of [`read_pcap`], also used by the fuzz tests.
pub fn read_pcap_bytes(bytes: &[u8], filter: &MacFilter) -> Result<CaptureStream, CaptureError> {
    let format = parse_global_header(bytes)?;
    let divisor = if format.nanos { 1e9 } else { 1e6 };

    let mut metadata = StreamMetadata::default();
    let mut raw_records: Vec<(f64, ParsedFrame)> = Vec::new();
    let mut offset = 24usize;
    while offset < bytes.len() {
        if bytes.len() - offset < 16 {
            metadata.count_skip(SkipReason::TruncatedPacket);
            break;
        }
        let ts_sec = read_u32(bytes, offset, format.big_endian).unwrap();
        let ts_frac = read_u32(bytes, offset + 4, format.big_endian).unwrap();
        let incl_len = read_u32(bytes, offset + 8, format.big_endian).unwrap() as usize;
        offset += 16;
        if bytes.len() - offset < incl_len {
            metadata.count_skip(SkipReason::TruncatedPacket);
            break;
        }
        let data = &bytes[offset..offset + incl_len];
        offset += incl_len;

        match parse_packet(data, filter) {
            Ok(frame) => {
                let t = ts_sec as f64 + ts_frac as f64 / divisor;
                metadata.trailing_bits += frame.trailing_bits;
                raw_records.push((t, frame));
            }
            Err(reason) => metadata.count_skip(reason),
        }
    }

    if raw_records.is_empty() {
        return Err(CaptureError::EmptyCapture {
            skipped: metadata.skipped,
            reasons: metadata.skip_summary(),
        });
    }

    raw_records.sort_by(|a, b| a.0.total_cmp(&b.0));
    let t0 = raw_records[0].0;
    let records = raw_records
        .into_iter()
        .map(|(t, frame)| BfmFrameRecord::new(t - t0, frame.source, frame.dest, frame.angle_sets))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(CaptureStream::new(records, metadata))
}

/// Write a stream as a classic little-endian microsecond pcap of minimal
/// radiotap + VHT action frames. The stream's quantization config must be
/// one of the codebook presets so the MIMO control field can express it.
pub fn write_pcap(stream: &CaptureStream, path: &Path) -> Result<(), CaptureError> {
    let bytes = pcap_bytes(stream)?;
    std::fs::write(path, bytes).map_err(|e| CaptureError::io(path, e))
}

pub fn pcap_bytes(stream: &CaptureStream) -> Result<Vec<u8>, CaptureError> {
    let mut out = Vec::new();
    out.extend_from_slice(&MAGIC_US.to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes()); // version major
    out.extend_from_slice(&4u16.to_le_bytes()); // version minor
    out.extend_from_slice(&0i32.to_le_bytes()); // thiszone
    out.extend_from_slice(&0u32.to_le_bytes()); // sigfigs
    out.extend_from_slice(&65535u32.to_le_bytes()); // snaplen
    out.extend_from_slice(&DLT_RADIOTAP.to_le_bytes());

    for (index, record) in stream.records.iter().enumerate() {
        let config = record.config();
        let (mu, codebook) = config.preset_bits().ok_or(CaptureError::NonPresetConfig {
            b_phi: config.b_phi,
            b_psi: config.b_psi,
        })?;

        let mut packet = Vec::new();
        // Radiotap header: version 0, pad, length 8, empty present bitmap.
        packet.extend_from_slice(&[0, 0, 8, 0, 0, 0, 0, 0]);
        // 802.11 management header, subtype Action.
        packet.push(FC_SUBTYPE_ACTION << 4); // frame control: mgmt type, Action
        packet.push(0); // frame control byte 1
        packet.extend_from_slice(&[0, 0]); // duration
        packet.extend_from_slice(&record.dest);
        packet.extend_from_slice(&record.source);
        packet.extend_from_slice(&record.source); // BSSID
        packet.extend_from_slice(&(((index as u16) << 4).to_le_bytes())); // sequence
                                                                          // Action body.
        packet.push(CATEGORY_VHT);
        packet.push(VHT_ACTION_COMPRESSED_BF);
        let mut mimo: u32 = 0;
        mimo |= (record.n_cols as u32 - 1) & 0b111;
        mimo |= ((record.n_rows as u32 - 1) & 0b111) << 3;
        mimo |= 0b10 << 6; // 80 MHz channel width
        if codebook {
            mimo |= 1 << 10;
        }
        if mu {
            mimo |= 1 << 11;
        }
        packet.push((mimo & 0xFF) as u8);
        packet.push(((mimo >> 8) & 0xFF) as u8);
        packet.push(((mimo >> 16) & 0xFF) as u8);
        // Average SNR per column.
        packet.extend(std::iter::repeat_n(0u8, record.n_cols));
        packet.extend_from_slice(&pack_angle_bitstream(&record.angle_sets));

        let mut sec = record.timestamp.floor() as u32;
        let mut usec = ((record.timestamp - record.timestamp.floor()) * 1e6).round() as u32;
        if usec >= 1_000_000 {
            sec += 1;
            usec -= 1_000_000;
        }
        out.extend_from_slice(&sec.to_le_bytes());
        out.extend_from_slice(&usec.to_le_bytes());
        out.extend_from_slice(&(packet.len() as u32).to_le_bytes());
        out.extend_from_slice(&(packet.len() as u32).to_le_bytes());
        out.extend_from_slice(&packet);
    }
    Ok(out)
}
