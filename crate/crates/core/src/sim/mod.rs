//! Transmitter hardware fingerprints, propagation effects, replay
//! spoofing, and labelled scenario generation.
//!
//! The impairment model is synthetic: magnitudes are chosen small enough
//! that packets still decode cleanly at high SNR and large enough that an
//! embedding model can tell emitters apart. Both properties are enforced
//! by tests rather than assumed.

mod channel;
mod profile;
mod scenario;
mod spoof;

pub use channel::{apply_channel, ChannelConfig};
pub use profile::{apply_fingerprint, EmitterProfile};
pub use scenario::{generate_scenario, ScenarioConfig, SnrDistribution};
pub use spoof::{spoof_replay, SpoofConfig};

use thiserror::Error;

/// Nominal downlink carrier, used to turn ppm oscillator error into hertz.
pub const CARRIER_HZ: f64 = 137.5e6;

/// VHF LEO Doppler plausibility bound.
pub const DOPPLER_LIMIT_HZ: f64 = 3500.0;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Signal(#[from] crate::signal::SignalError),
}
