//! Downlink packet layer: sync-packet layout, Fletcher checksum,
//! minor-frame assembly, and packet-error-rate accounting.
//!
//! A synchronization packet is 12 bytes, big-endian as written left to
//! right:
//!
//! ```text
//! +-----------------+--------+----------+---------+--------+-----------------+-----------+
//! | Sync header (3) | ID (1) | Fixed(1) | DCN (1) | MFC(1) |    Fixed (3)    |  FCS (2)  |
//! +-----------------+--------+----------+---------+--------+-----------------+-----------+
//! ```
//!
//! The FCS is a two-byte Fletcher checksum over the first ten bytes.

use thiserror::Error;

/// The three-byte synchronization header, 0x65A8F9.
pub const SYNC_HEADER: [u8; 3] = [0x65, 0xA8, 0xF9];
/// Serialized sync-packet length in bytes.
pub const SYNC_PACKET_LEN: usize = 12;
/// Words (bytes) in a minor frame.
pub const MINOR_FRAME_WORDS: usize = 600;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("expected {expected} bytes, got {got}")]
    Length { expected: usize, got: usize },
    #[error("bad sync header {found:02X?}")]
    Header { found: [u8; 3] },
    #[error("checksum mismatch: computed {computed:02X?}, found {found:02X?}")]
    Checksum { computed: [u8; 2], found: [u8; 2] },
    #[error("empty payload")]
    EmptyPayload,
    #[error("packet {index} has {words} words, expected 12 or 24")]
    BadPacketWords { index: usize, words: usize },
    #[error("minor frame totals {words} words, expected {MINOR_FRAME_WORDS}")]
    BadFrameTotal { words: usize },
    #[error("empty outcome sequence")]
    EmptyOutcomes,
}

/// Checksum arithmetic variant. The downlink documentation names the
/// Fletcher family without fixing the modulus, so it stays configurable;
/// the simulator default is mod-256.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FletcherVariant {
    /// Sums reduced mod 256.
    #[default]
    Mod256,
    /// Sums reduced mod 255 (classic Fletcher-16).
    Mod255,
}

/// Two-byte Fletcher checksum: `c1` is the running byte sum, `c2` the
/// running sum of `c1`, both reduced by the variant modulus.
pub fn fletcher16(payload: &[u8], variant: FletcherVariant) -> Result<(u8, u8), FrameError> {
    if payload.is_empty() {
        return Err(FrameError::EmptyPayload);
    }
    match variant {
        FletcherVariant::Mod256 => {
            let mut c1: u8 = 0;
            let mut c2: u8 = 0;
            for &b in payload {
                c1 = c1.wrapping_add(b);
                c2 = c2.wrapping_add(c1);
            }
            Ok((c1, c2))
        }
        FletcherVariant::Mod255 => {
            let mut c1: u32 = 0;
            let mut c2: u32 = 0;
            for &b in payload {
                c1 = (c1 + b as u32) % 255;
                c2 = (c2 + c1) % 255;
            }
            Ok((c1 as u8, c2 as u8))
        }
    }
}

/// Values for the fixed words of a sync packet. Their content is not
/// pinned by the downlink documentation; the default fill is 0x00.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FixedWords {
    pub fixed1: u8,
    pub fixed3: [u8; 3],
}

/// A decoded synchronization packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyncPacket {
    pub sat_id: u8,
    pub fixed1: u8,
    /// Downlink channel number.
    pub dcn: u8,
    /// Minor frame counter.
    pub mfc: u8,
    pub fixed3: [u8; 3],
    pub fcs: [u8; 2],
}

impl SyncPacket {
    pub fn to_bytes(&self) -> [u8; SYNC_PACKET_LEN] {
        let mut out = [0u8; SYNC_PACKET_LEN];
        out[..3].copy_from_slice(&SYNC_HEADER);
        out[3] = self.sat_id;
        out[4] = self.fixed1;
        out[5] = self.dcn;
        out[6] = self.mfc;
        out[7..10].copy_from_slice(&self.fixed3);
        out[10..].copy_from_slice(&self.fcs);
        out
    }
}

/// Build a 12-byte sync packet with the FCS computed over bytes 0..=9.
pub fn build_sync_packet(
    sat_id: u8,
    dcn: u8,
    mfc: u8,
    fixed: FixedWords,
    variant: FletcherVariant,
) -> [u8; SYNC_PACKET_LEN] {
    let mut out = [0u8; SYNC_PACKET_LEN];
    out[..3].copy_from_slice(&SYNC_HEADER);
    out[3] = sat_id;
    out[4] = fixed.fixed1;
    out[5] = dcn;
    out[6] = mfc;
    out[7..10].copy_from_slice(&fixed.fixed3);
    let (c1, c2) = fletcher16(&out[..10], variant).expect("ten-byte payload");
    out[10] = c1;
    out[11] = c2;
    out
}

/// Parse and verify a 12-byte sync packet. Failures are classified as
/// length, header, or checksum errors.
pub fn parse_packet(raw: &[u8], variant: FletcherVariant) -> Result<SyncPacket, FrameError> {
    if raw.len() != SYNC_PACKET_LEN {
        return Err(FrameError::Length {
            expected: SYNC_PACKET_LEN,
            got: raw.len(),
        });
    }
    if raw[..3] != SYNC_HEADER {
        return Err(FrameError::Header {
            found: [raw[0], raw[1], raw[2]],
        });
    }
    let (c1, c2) = fletcher16(&raw[..10], variant).expect("ten-byte payload");
    let found = [raw[10], raw[11]];
    if [c1, c2] != found {
        return Err(FrameError::Checksum {
            computed: [c1, c2],
            found,
        });
    }
    Ok(SyncPacket {
        sat_id: raw[3],
        fixed1: raw[4],
        dcn: raw[5],
        mfc: raw[6],
        fixed3: [raw[7], raw[8], raw[9]],
        fcs: found,
    })
}

/// A minor frame: packets of 12 or 24 words totaling exactly 600 words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorFrame {
    pub mfc: u8,
    packets: Vec<Vec<u8>>,
}

impl MinorFrame {
    /// Assemble a frame, rejecting any packet that is not 12 or 24 words
    /// long and any total other than 600 words.
    pub fn assemble(mfc: u8, packets: Vec<Vec<u8>>) -> Result<Self, FrameError> {
        let mut words = 0;
        for (index, p) in packets.iter().enumerate() {
            if p.len() != 12 && p.len() != 24 {
                return Err(FrameError::BadPacketWords {
                    index,
                    words: p.len(),
                });
            }
            words += p.len();
        }
        if words != MINOR_FRAME_WORDS {
            return Err(FrameError::BadFrameTotal { words });
        }
        Ok(Self { mfc, packets })
    }

    pub fn packets(&self) -> &[Vec<u8>] {
        &self.packets
    }

    /// Serialize to exactly 600 bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(MINOR_FRAME_WORDS);
        for p in &self.packets {
            out.extend_from_slice(p);
        }
        out
    }
}

/// Fraction of failed parse outcomes, in [0, 1].
pub fn packet_error_rate(outcomes: &[Result<SyncPacket, FrameError>]) -> Result<f64, FrameError> {
    if outcomes.is_empty() {
        return Err(FrameError::EmptyOutcomes);
    }
    let failed = outcomes.iter().filter(|o| o.is_err()).count();
    Ok(failed as f64 / outcomes.len() as f64)
}

/// MSB-first byte-to-bit expansion.
pub fn bytes_to_bits(bytes: &[u8]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(bytes.len() * 8);
    for &b in bytes {
        for i in (0..8).rev() {
            bits.push((b >> i) & 1);
        }
    }
    bits
}

/// MSB-first bit-to-byte packing. Trailing bits short of a full byte are
/// dropped.
pub fn bits_to_bytes(bits: &[u8]) -> Vec<u8> {
    bits.chunks_exact(8)
        .map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | (b & 1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fletcher_all_zero_payload() {
        for len in [1, 7, 10, 100] {
            let payload = vec![0u8; len];
            assert_eq!(
                fletcher16(&payload, FletcherVariant::Mod256).unwrap(),
                (0, 0)
            );
        }
    }

    #[test]
    fn fletcher_two_byte_reference() {
        // reference loop oracle: c1 = 1, then 3; c2 = 1, then 4
        assert_eq!(
            fletcher16(&[0x01, 0x02], FletcherVariant::Mod256).unwrap(),
            (0x03, 0x04)
        );
    }

    #[test]
    fn fletcher_empty_payload_rejected() {
        assert_eq!(
            fletcher16(&[], FletcherVariant::Mod256),
            Err(FrameError::EmptyPayload)
        );
    }

    #[test]
    fn build_parse_round_trip_all_sat_ids() {
        for sat in 0..=255u8 {
            let raw = build_sync_packet(sat, 3, 17, FixedWords::default(), FletcherVariant::Mod256);
            assert_eq!(raw.len(), 12);
            assert_eq!(&raw[..3], &[0x65, 0xA8, 0xF9]);
            let p = parse_packet(&raw, FletcherVariant::Mod256).unwrap();
            assert_eq!((p.sat_id, p.dcn, p.mfc), (sat, 3, 17));
        }
    }

    #[test]
    fn round_trip_mod255_variant() {
        let raw = build_sync_packet(0xAB, 9, 250, FixedWords::default(), FletcherVariant::Mod255);
        let p = parse_packet(&raw, FletcherVariant::Mod255).unwrap();
        assert_eq!(p.sat_id, 0xAB);
        // the two variants disagree on this packet
        assert!(parse_packet(&raw, FletcherVariant::Mod256).is_err());
    }

    #[test]
    fn every_single_bit_flip_rejected() {
        // exhaustive flip oracle over all 96 bit positions
        let raw = build_sync_packet(0x5C, 2, 99, FixedWords::default(), FletcherVariant::Mod256);
        for bit in 0..96 {
            let mut bad = raw;
            bad[bit / 8] ^= 1 << (7 - bit % 8);
            let res = parse_packet(&bad, FletcherVariant::Mod256);
            assert!(res.is_err(), "bit {bit} accepted");
        }
    }

    #[test]
    fn every_single_byte_corruption_rejected() {
        let raw = build_sync_packet(0x11, 0, 1, FixedWords::default(), FletcherVariant::Mod256);
        for pos in 0..12 {
            for delta in 1..=255u8 {
                let mut bad = raw;
                bad[pos] = bad[pos].wrapping_add(delta);
                assert!(
                    parse_packet(&bad, FletcherVariant::Mod256).is_err(),
                    "byte {pos} delta {delta} accepted"
                );
            }
        }
    }

    #[test]
    fn failure_classification() {
        let raw = build_sync_packet(1, 2, 3, FixedWords::default(), FletcherVariant::Mod256);
        assert_eq!(
            parse_packet(&raw[..11], FletcherVariant::Mod256),
            Err(FrameError::Length {
                expected: 12,
                got: 11
            })
        );
        let mut bad_header = raw;
        bad_header[0] = 0x00;
        assert!(matches!(
            parse_packet(&bad_header, FletcherVariant::Mod256),
            Err(FrameError::Header { .. })
        ));
        let mut bad_sum = raw;
        bad_sum[10] ^= 0xFF;
        assert!(matches!(
            parse_packet(&bad_sum, FletcherVariant::Mod256),
            Err(FrameError::Checksum { .. })
        ));
    }

    #[test]
    fn minor_frame_totals_600_words() {
        let frame = MinorFrame::assemble(7, vec![vec![0u8; 12]; 50]).unwrap();
        assert_eq!(frame.to_bytes().len(), 600);
        assert_eq!(frame.packets().len(), 50);

        let mixed = MinorFrame::assemble(7, {
            let mut v = vec![vec![0u8; 24]; 10];
            v.extend(vec![vec![0u8; 12]; 30]);
            v
        })
        .unwrap();
        assert_eq!(mixed.to_bytes().len(), 600);

        assert!(matches!(
            MinorFrame::assemble(7, vec![vec![0u8; 12]; 49]),
            Err(FrameError::BadFrameTotal { words: 588 })
        ));
        assert!(matches!(
            MinorFrame::assemble(7, vec![vec![0u8; 13]; 46]),
            Err(FrameError::BadPacketWords { index: 0, words: 13 })
        ));
    }

    #[test]
    fn per_counts_failures() {
        let ok = parse_packet(
            &build_sync_packet(1, 2, 3, FixedWords::default(), FletcherVariant::Mod256),
            FletcherVariant::Mod256,
        );
        let bad: Result<SyncPacket, FrameError> = Err(FrameError::Length {
            expected: 12,
            got: 0,
        });
        let outcomes: Vec<_> = (0..10)
            .map(|i| if i < 3 { bad.clone() } else { ok.clone() })
            .collect();
        assert!((packet_error_rate(&outcomes).unwrap() - 0.3).abs() < 1e-12);
        assert_eq!(packet_error_rate(&vec![ok; 4]).unwrap(), 0.0);
        assert!(packet_error_rate(&[]).is_err());
    }

    #[test]
    fn bit_packing_round_trip() {
        let bytes = [0x65, 0xA8, 0xF9, 0x00, 0xFF, 0x5A];
        assert_eq!(bits_to_bytes(&bytes_to_bits(&bytes)), bytes);
        assert_eq!(bytes_to_bits(&[0xA0])[..4], [1, 0, 1, 0]);
    }
}
