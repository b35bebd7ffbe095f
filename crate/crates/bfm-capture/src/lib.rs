//! Capture ingest: turn pcap files or fixture files into ordered streams
//! of beamforming feedback frame records.

mod bitstream;
mod error;
mod fixture;
mod pcap;
mod record;
mod unpack;

pub use bitstream::{BitReader, BitWriter};
pub use error::CaptureError;
pub use fixture::{
    read_fixture, write_fixture, write_fixture_to, DEFAULT_DEST_MAC, DEFAULT_SOURCE_MAC,
    FIXTURE_FORMAT,
};
pub use pcap::{pcap_bytes, read_pcap, read_pcap_bytes, write_pcap};
pub use record::{
    format_mac, parse_mac, BfmFrameRecord, CaptureStream, MacAddr, MacFilter, SkipReason,
    StreamMetadata,
};
pub use unpack::{
    bits_per_subcarrier, pack_angle_bitstream, unpack_angle_bitstream, UnpackedAngles,
};
