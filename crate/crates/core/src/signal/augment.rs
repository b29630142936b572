//! Training-time waveform augmentation: random phase, gain, and small
//! frequency shifts.

use super::{IqBuffer, SignalError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Sampling ranges for the three augmentations. Degenerate (zero-width)
/// intervals pin a parameter to a fixed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugmentRanges {
    /// Phase rotation, sub-interval of [0, 2*pi).
    pub phase: (f64, f64),
    /// Amplitude scale, sub-interval of [0.9, 1.0].
    pub scale: (f64, f64),
    /// Frequency shift as a fraction of the sample rate, sub-interval of
    /// [-0.01, 0.01].
    pub freq_frac: (f64, f64),
}

impl Default for AugmentRanges {
    fn default() -> Self {
        Self {
            phase: (0.0, TAU),
            scale: (0.9, 1.0),
            freq_frac: (-0.01, 0.01),
        }
    }
}

impl AugmentRanges {
    pub fn validate(&self) -> Result<(), SignalError> {
        let check = |name: &str, (lo, hi): (f64, f64), min: f64, max: f64| {
            if lo.is_finite() && hi.is_finite() && min <= lo && lo <= hi && hi <= max {
                Ok(())
            } else {
                Err(SignalError::InvalidParameter(format!(
                    "{name} range ({lo}, {hi}) outside [{min}, {max}]"
                )))
            }
        };
        check("phase", self.phase, 0.0, TAU)?;
        check("scale", self.scale, 0.9, 1.0)?;
        check("freq_frac", self.freq_frac, -0.01, 0.01)
    }

    /// A degenerate range set pinning (phase, scale, freq_frac) exactly.
    pub fn fixed(phase: f64, scale: f64, freq_frac: f64) -> Self {
        Self {
            phase: (phase, phase),
            scale: (scale, scale),
            freq_frac: (freq_frac, freq_frac),
        }
    }
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// Apply a random complex rotation, scalar gain, and frequency shift drawn
/// from `ranges`. Deterministic for a fixed seed.
pub fn augment(buf: &IqBuffer, ranges: &AugmentRanges, seed: u64) -> Result<IqBuffer, SignalError> {
    ranges.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase = draw(&mut rng, ranges.phase);
    let scale = draw(&mut rng, ranges.scale);
    let freq = draw(&mut rng, ranges.freq_frac);

    let samples = buf
        .samples
        .iter()
        .enumerate()
        .map(|(n, s)| s * Complex64::from_polar(scale, phase + TAU * freq * n as f64))
        .collect();
    IqBuffer::new(samples, buf.sample_rate)
}
