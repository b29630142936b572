//! Baseband DSP for the SDPSK downlink simulator and decoder.
//!
//! All operations are pure functions of their inputs (plus an explicit seed
//! where randomness is involved) and run in 64-bit floating point. Complex
//! baseband samples travel through the crate as [`IqBuffer`].

mod augment;
mod freq;
mod resample;
mod rrc;
mod sdpsk;
mod snr;

pub use augment::{augment, AugmentRanges};
pub use freq::{fine_frequency_correct, FreqCorrection};
pub use resample::interpolate;
pub use rrc::{design_rrc, RrcFilter};
pub use sdpsk::{grid_defect, sdpsk_demodulate, sdpsk_modulate, BitMapping};
pub use snr::{add_awgn, estimate_snr};

use num_complex::Complex64;
use std::cell::RefCell;
use std::sync::Arc;
use thiserror::Error;

/// Downlink symbol rate in baud.
pub const SYMBOL_RATE: f64 = 4800.0;
/// Canonical oversampling factor (samples per symbol).
pub const SPS: usize = 2;
/// Canonical complex sample rate in Sa/s.
pub const SAMPLE_RATE: f64 = SYMBOL_RATE * SPS as f64;
/// Bits in one sync packet.
pub const PACKET_BITS: usize = 96;
/// Samples in one packet-length buffer at the canonical rate.
pub const PACKET_SAMPLES: usize = PACKET_BITS * SPS;
/// Pulse-shaping roll-off.
pub const RRC_ALPHA: f64 = 0.4;
/// Filter span (in symbols) used by the canonical modem. Long enough that
/// the shaped spectrum stays below -40 dB outside the occupied band.
pub const RRC_SPAN: usize = 32;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("buffer too short: {len} samples, need at least {min}")]
    BufferTooShort { len: usize, min: usize },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
}

/// A complex baseband recording: interleaved I/Q pairs at a known rate.
#[derive(Debug, Clone, PartialEq)]
pub struct IqBuffer {
    pub samples: Vec<Complex64>,
    pub sample_rate: f64,
}

impl IqBuffer {
    pub fn new(samples: Vec<Complex64>, sample_rate: f64) -> Result<Self, SignalError> {
        if samples.is_empty() {
            return Err(SignalError::InvalidParameter("empty sample buffer".into()));
        }
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(SignalError::InvalidParameter(format!(
                "sample rate must be positive and finite, got {sample_rate}"
            )));
        }
        if !samples.iter().all(|s| s.re.is_finite() && s.im.is_finite()) {
            return Err(SignalError::InvalidParameter(
                "buffer contains non-finite samples".into(),
            ));
        }
        Ok(Self {
            samples,
            sample_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean sample power.
    pub fn power(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    /// Rescale to unit mean power. No-op on an all-zero buffer.
    pub fn normalize_power(&mut self) {
        let p = self.power();
        if p > 0.0 {
            let g = 1.0 / p.sqrt();
            for s in &mut self.samples {
                *s *= g;
            }
        }
    }
}

thread_local! {
    static PLANNER: RefCell<rustfft::FftPlanner<f64>> = RefCell::new(rustfft::FftPlanner::new());
}

pub(crate) fn fft_forward(len: usize) -> Arc<dyn rustfft::Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(len))
}

pub(crate) fn fft_inverse(len: usize) -> Arc<dyn rustfft::Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(len))
}

/// Cyclic FIR filtering with the tap at `center` aligned to zero delay.
///
/// Packets are synthesized as one period of a cyclic waveform, so both the
/// modulator and the matched filter use circular convolution; this keeps
/// packet length exactly `bits * sps` with no edge transients.
pub(crate) fn cyclic_filter(x: &[Complex64], taps: &[f64], center: usize) -> Vec<Complex64> {
    let n = x.len();
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for (m, &t) in taps.iter().enumerate() {
        if t == 0.0 {
            continue;
        }
        // shift = center - m, folded into [0, n)
        let shift = ((center as isize - m as isize).rem_euclid(n as isize)) as usize;
        for (i, yi) in y.iter_mut().enumerate() {
            let j = (i + shift) % n;
            *yi += x[j] * t;
        }
    }
    y
}

/// Map an FFT bin index to its signed fractional frequency in (-0.5, 0.5].
pub(crate) fn bin_to_frac(k: usize, len: usize) -> f64 {
    let k = k as f64;
    let l = len as f64;
    if k <= l / 2.0 {
        k / l
    } else {
        k / l - 1.0
    }
}
