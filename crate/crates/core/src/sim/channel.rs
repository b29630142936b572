//! Propagation effects: Doppler ramp, carrier phase, and calibrated AWGN.

use super::{SimError, DOPPLER_LIMIT_HZ};
use crate::signal::{add_awgn, IqBuffer};
use num_complex::Complex64;
use std::f64::consts::TAU;

/// One packet's propagation conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    /// Target SNR; `f64::INFINITY` disables noise.
    pub snr_db: f64,
    pub doppler_start_hz: f64,
    pub doppler_slope_hz_s: f64,
    pub carrier_phase_rad: f64,
    pub rng_seed: u64,
}

impl ChannelConfig {
    /// A noiseless, offset-free channel.
    pub fn clean() -> Self {
        Self {
            snr_db: f64::INFINITY,
            doppler_start_hz: 0.0,
            doppler_slope_hz_s: 0.0,
            carrier_phase_rad: 0.0,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.snr_db.is_nan() {
            return Err(SimError::InvalidParameter("snr_db is NaN".into()));
        }
        if self.doppler_start_hz.abs() > DOPPLER_LIMIT_HZ {
            return Err(SimError::InvalidParameter(format!(
                "doppler {} Hz outside +-{DOPPLER_LIMIT_HZ} Hz",
                self.doppler_start_hz
            )));
        }
        Ok(())
    }
}

/// Apply a Doppler ramp, a global carrier phase, and AWGN calibrated so the
/// measured SNR matches `snr_db`.
pub fn apply_channel(buf: &IqBuffer, ch: &ChannelConfig) -> Result<IqBuffer, SimError> {
    ch.validate()?;
    let fs = buf.sample_rate;
    let mut samples = Vec::with_capacity(buf.len());
    for (n, s) in buf.samples.iter().enumerate() {
        let t = n as f64 / fs;
        let phase = ch.carrier_phase_rad
            + TAU * (ch.doppler_start_hz * t + 0.5 * ch.doppler_slope_hz_s * t * t);
        samples.push(s * Complex64::from_polar(1.0, phase));
    }
    let shifted = IqBuffer {
        samples,
        sample_rate: fs,
    };
    Ok(add_awgn(&shifted, ch.snr_db, ch.rng_seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{
        design_rrc, estimate_snr, fine_frequency_correct, sdpsk_demodulate, sdpsk_modulate,
        BitMapping, RRC_ALPHA, RRC_SPAN, SAMPLE_RATE, SPS,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn packet(seed: u64) -> (Vec<u8>, IqBuffer) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bits: Vec<u8> = (0..96).map(|_| rng.random_range(0..=1u8)).collect();
        let f = design_rrc(RRC_ALPHA, RRC_SPAN, SPS).unwrap();
        let buf = sdpsk_modulate(&bits, SPS, &f, SAMPLE_RATE, BitMapping::OnePlus).unwrap();
        (bits, buf)
    }

    #[test]
    fn clean_channel_is_identity() {
        let (_, buf) = packet(1);
        let out = apply_channel(&buf, &ChannelConfig::clean()).unwrap();
        assert_eq!(out.samples, buf.samples);
    }

    #[test]
    fn requested_snr_is_measured() {
        // estimator oracle: ten dB in, ten dB out on average
        let mut acc = 0.0;
        for k in 0..100 {
            let (_, buf) = packet(k);
            let ch = ChannelConfig {
                snr_db: 10.0,
                rng_seed: crate::mix_seed(50, k),
                ..ChannelConfig::clean()
            };
            let noisy = apply_channel(&buf, &ch).unwrap();
            acc += estimate_snr(&noisy, SPS).unwrap();
        }
        let mean = acc / 100.0;
        assert!((mean - 10.0).abs() <= 1.5, "measured {mean} dB");
    }

    #[test]
    fn doppler_ramp_corrects_to_clean_decode() {
        // end-to-end oracle: ramped packet at 20 dB decodes after fine
        // frequency correction
        let f = design_rrc(RRC_ALPHA, RRC_SPAN, SPS).unwrap();
        for k in 0..10 {
            let (bits, buf) = packet(k);
            let ch = ChannelConfig {
                snr_db: 20.0,
                doppler_start_hz: 400.0,
                doppler_slope_hz_s: -30.0,
                carrier_phase_rad: 1.1,
                rng_seed: crate::mix_seed(60, k),
            };
            let rx = apply_channel(&buf, &ch).unwrap();
            let (fixed, c) = fine_frequency_correct(&rx).unwrap();
            assert!(c.offset_hz().is_some());
            let (out, _) = sdpsk_demodulate(&fixed, SPS, &f, BitMapping::OnePlus).unwrap();
            assert_eq!(out, bits, "seed {k}");
        }
    }

    #[test]
    fn doppler_bound_enforced() {
        let (_, buf) = packet(1);
        let ch = ChannelConfig {
            doppler_start_hz: 9000.0,
            ..ChannelConfig::clean()
        };
        assert!(apply_channel(&buf, &ch).is_err());
    }
}
