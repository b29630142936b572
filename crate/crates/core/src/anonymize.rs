//! Training-time bit-transition shuffling.
//!
//! The logical content of a packet (IDs, counters, checksums) must not
//! leak into the embedding, so during training the waveform is cut into
//! one-symbol segments classed by the ordered pair of consecutive bits,
//! and segments are permuted uniformly at random within each class. The
//! per-class sample multisets and the class layout over positions are
//! preserved; only which instance sits where changes. Stitching is plain
//! concatenation, so discontinuities at segment boundaries are accepted.

use crate::signal::{IqBuffer, SignalError};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnonymizeError {
    #[error("buffer of {samples} samples is not {bits} bits x {per_symbol} samples")]
    LengthMismatch {
        samples: usize,
        bits: usize,
        per_symbol: usize,
    },
    #[error(transparent)]
    Signal(#[from] SignalError),
}

/// Ordered pair of consecutive bits (previous, current).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransitionClass {
    ZeroZero,
    ZeroOne,
    OneZero,
    OneOne,
}

impl TransitionClass {
    pub fn of(prev: u8, cur: u8) -> Self {
        match (prev != 0, cur != 0) {
            (false, false) => TransitionClass::ZeroZero,
            (false, true) => TransitionClass::ZeroOne,
            (true, false) => TransitionClass::OneZero,
            (true, true) => TransitionClass::OneOne,
        }
    }

    pub const ALL: [TransitionClass; 4] = [
        TransitionClass::ZeroZero,
        TransitionClass::ZeroOne,
        TransitionClass::OneZero,
        TransitionClass::OneOne,
    ];

    fn index(self) -> usize {
        match self {
            TransitionClass::ZeroZero => 0,
            TransitionClass::ZeroOne => 1,
            TransitionClass::OneZero => 2,
            TransitionClass::OneOne => 3,
        }
    }
}

/// One symbol period of waveform, classed by the bit transition it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionSegment {
    pub class: TransitionClass,
    pub samples: Vec<Complex64>,
}

/// A packet cut into its first symbol (which has no preceding bit) and one
/// segment per following bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentedPacket {
    pub head: Vec<Complex64>,
    pub segments: Vec<TransitionSegment>,
    pub sample_rate: f64,
}

impl SegmentedPacket {
    /// Reassemble by plain concatenation.
    pub fn concat(&self) -> IqBuffer {
        let mut samples = self.head.clone();
        for s in &self.segments {
            samples.extend_from_slice(&s.samples);
        }
        IqBuffer {
            samples,
            sample_rate: self.sample_rate,
        }
    }
}

/// Cut `buf` into one-symbol transition segments.
///
/// `samples_per_symbol` is the symbol period in samples of `buf` (after
/// any interpolation), and `bits` are the packet's bits from the
/// demodulator or the simulator ground truth. The buffer length must be
/// exactly `bits.len() * samples_per_symbol`.
pub fn segment_transitions(
    buf: &IqBuffer,
    samples_per_symbol: usize,
    bits: &[u8],
) -> Result<SegmentedPacket, AnonymizeError> {
    if samples_per_symbol == 0 || buf.len() != bits.len() * samples_per_symbol {
        return Err(AnonymizeError::LengthMismatch {
            samples: buf.len(),
            bits: bits.len(),
            per_symbol: samples_per_symbol,
        });
    }
    let head = buf.samples[..samples_per_symbol].to_vec();
    let segments = bits
        .windows(2)
        .enumerate()
        .map(|(k, pair)| TransitionSegment {
            class: TransitionClass::of(pair[0], pair[1]),
            samples: buf.samples[(k + 1) * samples_per_symbol..(k + 2) * samples_per_symbol]
                .to_vec(),
        })
        .collect();
    Ok(SegmentedPacket {
        head,
        segments,
        sample_rate: buf.sample_rate,
    })
}

/// Permute segments uniformly at random within each transition class and
/// stitch the packet back together. Positions keep their class; only the
/// instance occupying each position changes. Deterministic per seed.
pub fn shuffle_transitions(packet: &SegmentedPacket, seed: u64) -> IqBuffer {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // per class: the positions it occupies, and a permutation of them
    let mut positions: [Vec<usize>; 4] = Default::default();
    for (i, seg) in packet.segments.iter().enumerate() {
        positions[seg.class.index()].push(i);
    }
    let mut sources = positions.clone();
    for class_sources in sources.iter_mut() {
        class_sources.shuffle(&mut rng);
    }

    let mut samples = packet.head.clone();
    let per = packet.head.len();
    samples.resize(per * (1 + packet.segments.len()), Complex64::new(0.0, 0.0));
    for c in 0..4 {
        for (dst, src) in positions[c].iter().zip(&sources[c]) {
            let out = (dst + 1) * per;
            samples[out..out + per].copy_from_slice(&packet.segments[*src].samples);
        }
    }
    IqBuffer {
        samples,
        sample_rate: packet.sample_rate,
    }
}

/// The full training-time transform: identity at inference, segment and
/// shuffle when `training` is set.
pub fn anonymize_packet(
    buf: &IqBuffer,
    samples_per_symbol: usize,
    bits: &[u8],
    seed: u64,
    training: bool,
) -> Result<IqBuffer, AnonymizeError> {
    if !training {
        return Ok(buf.clone());
    }
    let segmented = segment_transitions(buf, samples_per_symbol, bits)?;
    Ok(shuffle_transitions(&segmented, seed))
}
