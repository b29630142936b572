//! Persistent packet-capture storage (the ORBD format), filtering, and
//! deterministic dataset splitting.

mod filter;
mod format;
mod import;
mod split;

pub use filter::RecordFilter;
pub use format::{read, write, OrbdHeader, OrbdReader, OrbdWriter, ORBD_MAGIC, ORBD_VERSION};
pub use import::{export_raw, import_raw, RawMetadata, RawSidecar};
pub use split::{split, DatasetSplit};

use num_complex::Complex32;
use thiserror::Error;

/// Flag bit marking a spoofed (replayed) capture.
pub const FLAG_SPOOFED: u8 = 0x01;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad magic {found:02X?}, expected \"ORBD\"")]
    BadMagic { found: [u8; 4] },
    #[error("unsupported version {found}, expected {ORBD_VERSION}")]
    BadVersion { found: u16 },
    #[error("truncated record {ordinal} of {total}")]
    Truncated { ordinal: u64, total: u64 },
    #[error("record {ordinal} has {got} samples, file expects {expected}")]
    InconsistentSamples {
        ordinal: u64,
        expected: u32,
        got: usize,
    },
    #[error("record {ordinal} contains non-finite values")]
    NonFinite { ordinal: u64 },
    #[error("invalid split fractions: test {test} + validation {val} must stay below 1")]
    InvalidFractions { test: f64, val: f64 },
    #[error("raw sample count {count} is not a multiple of {per_record} (strict mode)")]
    RaggedBoundary { count: usize, per_record: usize },
    #[error("sidecar: {0}")]
    Sidecar(String),
    #[error("empty record set")]
    Empty,
}

/// One captured packet: metadata plus a fixed number of complex samples.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketRecord {
    pub sat_id: u8,
    pub site_id: u8,
    pub sdr_id: u8,
    pub antenna_id: u8,
    /// Bit 0 marks a spoofed capture.
    pub flags: u8,
    pub snr_db: f32,
    /// Epoch nanoseconds.
    pub timestamp_ns: i64,
    pub samples: Vec<Complex32>,
}

impl PacketRecord {
    pub fn spoofed(&self) -> bool {
        self.flags & FLAG_SPOOFED != 0
    }

    /// Widen the stored samples into a DSP buffer at the given rate.
    pub fn iq_buffer(&self, sample_rate: f64) -> crate::signal::IqBuffer {
        crate::signal::IqBuffer {
            samples: self
                .samples
                .iter()
                .map(|s| num_complex::Complex64::new(s.re as f64, s.im as f64))
                .collect(),
            sample_rate,
        }
    }

    pub(crate) fn check_finite(&self, ordinal: u64) -> Result<(), DatasetError> {
        let ok = self.snr_db.is_finite()
            && self
                .samples
                .iter()
                .all(|s| s.re.is_finite() && s.im.is_finite());
        if ok {
            Ok(())
        } else {
            Err(DatasetError::NonFinite { ordinal })
        }
    }
}
