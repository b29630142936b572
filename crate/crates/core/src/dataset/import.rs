//! Ingestion of raw interleaved-float captures with a TOML sidecar.

use super::{DatasetError, PacketRecord};
use num_complex::Complex32;
use serde::Deserialize;
use std::path::Path;

/// Sidecar metadata accompanying a raw interleaved f32 I/Q file.
///
/// ```toml
/// samples_per_record = 192   # optional, default 192
/// strict = false             # optional: error on a ragged tail
/// sample_rate = 9600.0       # optional, default 9600
///
/// [metadata]
/// sat_id = 26                # required
/// site_id = 0                # required
/// sdr_id = 0                 # required
/// antenna_id = 0             # required
/// timestamp_ns = 0           # required: timestamp of the first record
/// timestamp_step_ns = 20_000_000   # optional: per-record increment
/// snr_db = 12.5              # optional: estimated per record if absent
/// spoofed = false            # optional
/// ```
#[derive(Debug, Clone, Deserialize)]
pub struct RawSidecar {
    #[serde(default = "default_n")]
    pub samples_per_record: usize,
    #[serde(default)]
    pub strict: bool,
    #[serde(default = "default_rate")]
    pub sample_rate: f64,
    pub metadata: RawMetadata,
}

#[derive(Debug, Clone, Deserialize)]
pub struct RawMetadata {
    pub sat_id: u8,
    pub site_id: u8,
    pub sdr_id: u8,
    pub antenna_id: u8,
    pub timestamp_ns: i64,
    #[serde(default = "default_step")]
    pub timestamp_step_ns: i64,
    #[serde(default)]
    pub snr_db: Option<f32>,
    #[serde(default)]
    pub spoofed: bool,
}

fn default_n() -> usize {
    crate::signal::PACKET_SAMPLES
}

fn default_rate() -> f64 {
    crate::signal::SAMPLE_RATE
}

fn default_step() -> i64 {
    // one 96-bit packet at 4800 bps
    20_000_000
}

impl RawSidecar {
    pub fn parse(text: &str) -> Result<Self, DatasetError> {
        let sidecar: RawSidecar =
            toml::from_str(text).map_err(|e| DatasetError::Sidecar(e.to_string()))?;
        if sidecar.samples_per_record == 0 {
            return Err(DatasetError::Sidecar(
                "samples_per_record must be positive".into(),
            ));
        }
        Ok(sidecar)
    }

    pub fn load(path: &Path) -> Result<Self, DatasetError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Import a raw interleaved 32-bit float I/Q file.
///
/// Packet boundaries are implicit: every `samples_per_record` complex
/// samples form one record. A trailing partial record is dropped, or is an
/// error in strict mode. When the sidecar omits `snr_db` it is estimated
/// per record.
pub fn import_raw(iq_path: &Path, sidecar: &RawSidecar) -> Result<Vec<PacketRecord>, DatasetError> {
    let bytes = std::fs::read(iq_path)?;
    if bytes.len() % 8 != 0 {
        return Err(DatasetError::Sidecar(format!(
            "raw file length {} is not a whole number of complex f32 samples",
            bytes.len()
        )));
    }
    let samples: Vec<Complex32> = bytes
        .chunks_exact(8)
        .map(|c| {
            Complex32::new(
                f32::from_le_bytes(c[..4].try_into().unwrap()),
                f32::from_le_bytes(c[4..].try_into().unwrap()),
            )
        })
        .collect();

    let n = sidecar.samples_per_record;
    if sidecar.strict && samples.len() % n != 0 {
        return Err(DatasetError::RaggedBoundary {
            count: samples.len(),
            per_record: n,
        });
    }

    let meta = &sidecar.metadata;
    let mut records = Vec::with_capacity(samples.len() / n);
    for (k, chunk) in samples.chunks_exact(n).enumerate() {
        let record_samples = chunk.to_vec();
        let snr_db = match meta.snr_db {
            Some(v) => v,
            None => {
                let buf = PacketRecord {
                    sat_id: 0,
                    site_id: 0,
                    sdr_id: 0,
                    antenna_id: 0,
                    flags: 0,
                    snr_db: 0.0,
                    timestamp_ns: 0,
                    samples: record_samples.clone(),
                }
                .iq_buffer(sidecar.sample_rate);
                crate::signal::estimate_snr(&buf, crate::signal::SPS).unwrap_or(0.0) as f32
            }
        };
        let record = PacketRecord {
            sat_id: meta.sat_id,
            site_id: meta.site_id,
            sdr_id: meta.sdr_id,
            antenna_id: meta.antenna_id,
            flags: meta.spoofed as u8,
            snr_db,
            timestamp_ns: meta.timestamp_ns + k as i64 * meta.timestamp_step_ns,
            samples: record_samples,
        };
        record.check_finite(k as u64)?;
        records.push(record);
    }
    Ok(records)
}

/// Write records back out as a raw interleaved f32 I/Q file (no metadata).
pub fn export_raw(records: &[PacketRecord], path: &Path) -> Result<(), DatasetError> {
    let mut bytes = Vec::new();
    for r in records {
        for s in &r.samples {
            bytes.extend_from_slice(&s.re.to_le_bytes());
            bytes.extend_from_slice(&s.im.to_le_bytes());
        }
    }
    std::fs::write(path, bytes)?;
    Ok(())
}
