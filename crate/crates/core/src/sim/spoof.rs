//! Record-and-replay spoofing through an attacker SDR.

use super::{apply_fingerprint, EmitterProfile, SimError};
use crate::signal::IqBuffer;
use num_complex::Complex64;

/// Replay-chain parameters: the attacker re-digitizes a received signal,
/// attenuates it, and re-emits it through their own hardware.
#[derive(Debug, Clone, PartialEq)]
pub struct SpoofConfig {
    pub attacker_profile: EmitterProfile,
    /// ADC/DAC resolution of the attacker SDR.
    pub quantization_bits: u8,
    /// In-line attenuation between attacker and victim.
    pub attenuation_db: f64,
}

impl SpoofConfig {
    pub fn new(attacker_profile: EmitterProfile) -> Self {
        Self {
            attacker_profile,
            quantization_bits: 8,
            attenuation_db: 10.0,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(4..=16).contains(&self.quantization_bits) {
            return Err(SimError::InvalidParameter(format!(
                "quantization bits {} outside [4, 16]",
                self.quantization_bits
            )));
        }
        Ok(())
    }
}

/// Re-quantize, attenuate, and pass a received buffer through the
/// attacker's impairment chain.
pub fn spoof_replay(buf: &IqBuffer, cfg: &SpoofConfig, seed: u64) -> Result<IqBuffer, SimError> {
    cfg.validate()?;

    // full-scale set by the buffer peak, mimicking an AGC'd capture
    let peak = buf
        .samples
        .iter()
        .map(|s| s.re.abs().max(s.im.abs()))
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let levels = ((1u32 << (cfg.quantization_bits - 1)) - 1) as f64;
    let q = |x: f64| (x / peak * levels).round() / levels * peak;

    let gain = 10f64.powf(-cfg.attenuation_db / 20.0);
    let samples: Vec<Complex64> = buf
        .samples
        .iter()
        .map(|s| Complex64::new(q(s.re) * gain, q(s.im) * gain))
        .collect();
    let replayed = IqBuffer {
        samples,
        sample_rate: buf.sample_rate,
    };
    Ok(apply_fingerprint(&replayed, &cfg.attacker_profile, seed))
}
