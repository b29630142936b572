//! Labelled packet-capture synthesis at scale.

use super::{
    apply_channel, apply_fingerprint, spoof_replay, ChannelConfig, EmitterProfile, SimError,
    SpoofConfig, DOPPLER_LIMIT_HZ,
};
use crate::dataset::{PacketRecord, FLAG_SPOOFED};
use crate::mix_seed;
use crate::protocol::{build_sync_packet, bytes_to_bits, FixedWords, FletcherVariant};
use crate::signal::{
    design_rrc, estimate_snr, fine_frequency_correct, sdpsk_modulate, BitMapping, RrcFilter,
    RRC_ALPHA, RRC_SPAN, SAMPLE_RATE, SPS,
};
use num_complex::Complex32;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Per-packet SNR draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SnrDistribution {
    /// Uniform in dB (log-uniform in linear power).
    LogUniform { low_db: f64, high_db: f64 },
    Fixed { db: f64 },
}

impl Default for SnrDistribution {
    fn default() -> Self {
        // the collected-downlink regime is low-SNR
        SnrDistribution::LogUniform {
            low_db: 0.0,
            high_db: 20.0,
        }
    }
}

impl SnrDistribution {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            SnrDistribution::LogUniform { low_db, high_db } => {
                if low_db == high_db {
                    low_db
                } else {
                    rng.random_range(low_db..high_db)
                }
            }
            SnrDistribution::Fixed { db } => db,
        }
    }
}

/// Scenario parameters. All fields have defaults so a config file only
/// needs to name what it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub n_emitters: usize,
    pub packets_per_emitter: usize,
    pub snr: SnrDistribution,
    /// Fraction of each emitter's packets replayed through the attacker
    /// chain; the spoofed count is exact, not a coin flip.
    pub spoof_fraction: f64,
    pub seed: u64,
    pub doppler_max_hz: f64,
    pub doppler_slope_max_hz_s: f64,
    pub spoof_quantization_bits: u8,
    pub spoof_attenuation_db: f64,
    /// SNR at which the attacker captured the replayed signal.
    pub attacker_capture_snr_db: f64,
    pub start_timestamp_ns: i64,
    /// Capture campaign length; timestamps are spread uniformly over it.
    pub duration_days: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            n_emitters: 8,
            packets_per_emitter: 1000,
            snr: SnrDistribution::default(),
            spoof_fraction: 0.0,
            seed: 1,
            doppler_max_hz: 500.0,
            doppler_slope_max_hz_s: 30.0,
            spoof_quantization_bits: 8,
            spoof_attenuation_db: 10.0,
            attacker_capture_snr_db: 25.0,
            start_timestamp_ns: 1_717_200_000_000_000_000, // 2024-06-01
            duration_days: 14.0,
        }
    }
}

/// The attacker SDR's satellite id slot (never assigned to an emitter).
const ATTACKER_ID: u8 = 255;

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if self.n_emitters < 2 {
            return Err(SimError::InvalidParameter(format!(
                "need at least 2 emitters, got {}",
                self.n_emitters
            )));
        }
        if self.n_emitters > 128 {
            return Err(SimError::InvalidParameter(format!(
                "at most 128 emitters supported, got {}",
                self.n_emitters
            )));
        }
        if self.packets_per_emitter == 0 {
            return Err(SimError::InvalidParameter("zero packets per emitter".into()));
        }
        if !(0.0..=1.0).contains(&self.spoof_fraction) {
            return Err(SimError::InvalidParameter(format!(
                "spoof fraction {} outside [0, 1]",
                self.spoof_fraction
            )));
        }
        if self.doppler_max_hz.abs() > DOPPLER_LIMIT_HZ {
            return Err(SimError::InvalidParameter(format!(
                "doppler bound {} Hz outside +-{DOPPLER_LIMIT_HZ} Hz",
                self.doppler_max_hz
            )));
        }
        if !(4..=16).contains(&self.spoof_quantization_bits) {
            return Err(SimError::InvalidParameter(format!(
                "quantization bits {} outside [4, 16]",
                self.spoof_quantization_bits
            )));
        }
        Ok(())
    }

    /// Distinct satellite ids, spread across the byte range, reserving
    /// [`ATTACKER_ID`] for the attacker SDR.
    pub fn sat_ids(&self) -> Vec<u8> {
        let n = self.n_emitters;
        (0..n)
            .map(|i| {
                if n == 1 {
                    1
                } else {
                    (1.0 + i as f64 * 253.0 / (n - 1) as f64).round() as u8
                }
            })
            .collect()
    }
}

/// Generate the full labelled record set for a scenario.
///
/// Every record is a pure function of `(seed, emitter index, packet
/// index)`, so generation shards freely across workers and reruns are
/// byte-identical.
pub fn generate_scenario(cfg: &ScenarioConfig) -> Result<Vec<PacketRecord>, SimError> {
    cfg.validate()?;
    let filter = design_rrc(RRC_ALPHA, RRC_SPAN, SPS)?;
    let sat_ids = cfg.sat_ids();
    let attacker = EmitterProfile::derive(ATTACKER_ID, mix_seed(cfg.seed, ATTACKER_ID as u64));

    let per_emitter: Vec<Vec<PacketRecord>> = (0..cfg.n_emitters)
        .into_par_iter()
        .map(|e| {
            let sat = sat_ids[e];
            let profile = EmitterProfile::derive(sat, cfg.seed);
            let emitter_seed = mix_seed(cfg.seed, e as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(emitter_seed, u64::MAX));
            let dcn = rng.random_range(1..=13u8);

            // exact spoof quota via a seeded permutation
            let quota =
                (cfg.packets_per_emitter as f64 * cfg.spoof_fraction).round() as usize;
            let mut ranks: Vec<usize> = (0..cfg.packets_per_emitter).collect();
            ranks.shuffle(&mut rng);
            let mut spoof_mask = vec![false; cfg.packets_per_emitter];
            for &k in ranks.iter().take(quota) {
                spoof_mask[k] = true;
            }

            (0..cfg.packets_per_emitter)
                .map(|k| {
                    synth_record(
                        cfg,
                        &filter,
                        &profile,
                        &attacker,
                        dcn,
                        mix_seed(emitter_seed, k as u64),
                        k,
                        spoof_mask[k],
                    )
                })
                .collect()
        })
        .collect();

    Ok(per_emitter.into_iter().flatten().collect())
}

#[allow(clippy::too_many_arguments)]
fn synth_record(
    cfg: &ScenarioConfig,
    filter: &RrcFilter,
    profile: &EmitterProfile,
    attacker: &EmitterProfile,
    dcn: u8,
    packet_seed: u64,
    k: usize,
    spoofed: bool,
) -> PacketRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(packet_seed);

    let raw = build_sync_packet(
        profile.sat_id,
        dcn,
        (k % 256) as u8,
        FixedWords::default(),
        FletcherVariant::Mod256,
    );
    let bits = bytes_to_bits(&raw);
    let clean = sdpsk_modulate(&bits, SPS, filter, SAMPLE_RATE, BitMapping::OnePlus)
        .expect("non-empty packet bits");

    let mut signal = apply_fingerprint(&clean, profile, mix_seed(packet_seed, 1));

    if spoofed {
        let capture = ChannelConfig {
            snr_db: cfg.attacker_capture_snr_db,
            doppler_start_hz: rng.random_range(-cfg.doppler_max_hz..=cfg.doppler_max_hz),
            doppler_slope_hz_s: rng
                .random_range(-cfg.doppler_slope_max_hz_s..=cfg.doppler_slope_max_hz_s),
            carrier_phase_rad: rng.random_range(0.0..std::f64::consts::TAU),
            rng_seed: mix_seed(packet_seed, 2),
        };
        signal = apply_channel(&signal, &capture).expect("validated channel");
        let spoof_cfg = SpoofConfig {
            attacker_profile: attacker.clone(),
            quantization_bits: cfg.spoof_quantization_bits,
            attenuation_db: cfg.spoof_attenuation_db,
        };
        signal = spoof_replay(&signal, &spoof_cfg, mix_seed(packet_seed, 3)).expect("valid spoof");
    }

    let victim = ChannelConfig {
        snr_db: cfg.snr.draw(&mut rng),
        doppler_start_hz: rng.random_range(-cfg.doppler_max_hz..=cfg.doppler_max_hz),
        doppler_slope_hz_s: rng
            .random_range(-cfg.doppler_slope_max_hz_s..=cfg.doppler_slope_max_hz_s),
        carrier_phase_rad: rng.random_range(0.0..std::f64::consts::TAU),
        rng_seed: mix_seed(packet_seed, 4),
    };
    let rx = apply_channel(&signal, &victim).expect("validated channel");

    // receiver storage convention: frequency-corrected, power-normalized
    let (mut stored, _) = fine_frequency_correct(&rx).expect("packet-length buffer");
    stored.normalize_power();
    let measured_snr = estimate_snr(&stored, SPS).unwrap_or(0.0);

    let site = rng.random_range(0..2u8);
    let duration_ns = (cfg.duration_days * 86_400.0 * 1e9) as i64;
    let timestamp_ns = cfg.start_timestamp_ns + rng.random_range(0..duration_ns.max(1));

    PacketRecord {
        sat_id: profile.sat_id,
        site_id: site,
        sdr_id: site,
        antenna_id: site,
        flags: if spoofed { FLAG_SPOOFED } else { 0 },
        snr_db: measured_snr as f32,
        timestamp_ns,
        samples: stored
            .samples
            .iter()
            .map(|s| Complex32::new(s.re as f32, s.im as f32))
            .collect(),
    }
}
