//! The ORBD capture file format.
//!
//! Little-endian throughout:
//!
//! ```text
//! magic    "ORBD"            4 bytes
//! version  u16               currently 1
//! n        u32               samples per record (constant within a file)
//! count    u64               record count
//! records  count times:
//!   sat_id u8, site_id u8, sdr_id u8, antenna_id u8, flags u8, reserved u8,
//!   snr_db f32, timestamp_ns i64,
//!   samples n times (I f32, Q f32)
//! ```

use super::{DatasetError, PacketRecord};
use num_complex::Complex32;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

pub const ORBD_MAGIC: [u8; 4] = *b"ORBD";
pub const ORBD_VERSION: u16 = 1;

const FILE_HEADER_LEN: usize = 4 + 2 + 4 + 8;
const RECORD_META_LEN: usize = 6 + 4 + 8;

/// Parsed file header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbdHeader {
    pub samples_per_record: u32,
    pub record_count: u64,
}

/// Streaming writer. The record count is patched into the header when the
/// writer is finished.
pub struct OrbdWriter {
    out: BufWriter<File>,
    samples_per_record: u32,
    written: u64,
}

impl OrbdWriter {
    pub fn create(path: &Path, samples_per_record: u32) -> Result<Self, DatasetError> {
        let mut out = BufWriter::new(File::create(path)?);
        out.write_all(&ORBD_MAGIC)?;
        out.write_all(&ORBD_VERSION.to_le_bytes())?;
        out.write_all(&samples_per_record.to_le_bytes())?;
        out.write_all(&0u64.to_le_bytes())?;
        Ok(Self {
            out,
            samples_per_record,
            written: 0,
        })
    }

    pub fn push(&mut self, record: &PacketRecord) -> Result<(), DatasetError> {
        if record.samples.len() != self.samples_per_record as usize {
            return Err(DatasetError::InconsistentSamples {
                ordinal: self.written,
                expected: self.samples_per_record,
                got: record.samples.len(),
            });
        }
        record.check_finite(self.written)?;
        let mut buf = Vec::with_capacity(RECORD_META_LEN + record.samples.len() * 8);
        buf.extend_from_slice(&[
            record.sat_id,
            record.site_id,
            record.sdr_id,
            record.antenna_id,
            record.flags,
            0u8,
        ]);
        buf.extend_from_slice(&record.snr_db.to_le_bytes());
        buf.extend_from_slice(&record.timestamp_ns.to_le_bytes());
        for s in &record.samples {
            buf.extend_from_slice(&s.re.to_le_bytes());
            buf.extend_from_slice(&s.im.to_le_bytes());
        }
        self.out.write_all(&buf)?;
        self.written += 1;
        Ok(())
    }

    /// Patch the header count and flush.
    pub fn finish(mut self) -> Result<u64, DatasetError> {
        self.out.flush()?;
        let mut file = self.out.into_inner().map_err(|e| e.into_error())?;
        file.seek(SeekFrom::Start((4 + 2 + 4) as u64))?;
        file.write_all(&self.written.to_le_bytes())?;
        file.sync_all()?;
        Ok(self.written)
    }
}

/// Streaming reader; holds one record's samples in memory at a time.
pub struct OrbdReader {
    input: BufReader<File>,
    header: OrbdHeader,
    next: u64,
}

impl OrbdReader {
    pub fn open(path: &Path) -> Result<Self, DatasetError> {
        let mut input = BufReader::new(File::open(path)?);
        let mut head = [0u8; FILE_HEADER_LEN];
        input.read_exact(&mut head)?;
        let magic: [u8; 4] = head[..4].try_into().unwrap();
        if magic != ORBD_MAGIC {
            return Err(DatasetError::BadMagic { found: magic });
        }
        let version = u16::from_le_bytes(head[4..6].try_into().unwrap());
        if version != ORBD_VERSION {
            return Err(DatasetError::BadVersion { found: version });
        }
        let samples_per_record = u32::from_le_bytes(head[6..10].try_into().unwrap());
        let record_count = u64::from_le_bytes(head[10..18].try_into().unwrap());
        Ok(Self {
            input,
            header: OrbdHeader {
                samples_per_record,
                record_count,
            },
            next: 0,
        })
    }

    pub fn header(&self) -> OrbdHeader {
        self.header
    }

    fn read_record(&mut self) -> Result<PacketRecord, DatasetError> {
        let n = self.header.samples_per_record as usize;
        let mut buf = vec![0u8; RECORD_META_LEN + n * 8];
        self.input.read_exact(&mut buf).map_err(|_| {
            DatasetError::Truncated {
                ordinal: self.next,
                total: self.header.record_count,
            }
        })?;
        let snr_db = f32::from_le_bytes(buf[6..10].try_into().unwrap());
        let timestamp_ns = i64::from_le_bytes(buf[10..18].try_into().unwrap());
        let mut samples = Vec::with_capacity(n);
        for c in buf[RECORD_META_LEN..].chunks_exact(8) {
            samples.push(Complex32::new(
                f32::from_le_bytes(c[..4].try_into().unwrap()),
                f32::from_le_bytes(c[4..].try_into().unwrap()),
            ));
        }
        let record = PacketRecord {
            sat_id: buf[0],
            site_id: buf[1],
            sdr_id: buf[2],
            antenna_id: buf[3],
            flags: buf[4],
            snr_db,
            timestamp_ns,
            samples,
        };
        self.next += 1;
        Ok(record)
    }
}

impl Iterator for OrbdReader {
    type Item = Result<PacketRecord, DatasetError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.header.record_count {
            return None;
        }
        Some(self.read_record())
    }
}

/// Write all records to `path`. The sample count per record is taken from
/// the first record (192 for an empty set).
pub fn write(records: &[PacketRecord], path: &Path) -> Result<(), DatasetError> {
    let n = records.first().map_or(192, |r| r.samples.len()) as u32;
    let mut writer = OrbdWriter::create(path, n)?;
    for r in records {
        writer.push(r)?;
    }
    writer.finish()?;
    Ok(())
}

/// Read a whole file into memory.
pub fn read(path: &Path) -> Result<Vec<PacketRecord>, DatasetError> {
    OrbdReader::open(path)?.collect()
}
