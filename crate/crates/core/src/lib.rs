//! RF fingerprinting toolkit for SDPSK satellite downlinks.
//!
//! The crate covers the full experiment pipeline:
//!
//! - [`signal`]: baseband DSP (RRC pulse shaping, SDPSK mod/demod,
//!   interpolation, augmentation, SNR estimation, frequency correction)
//! - [`protocol`]: sync-packet layout, Fletcher checksum, PER accounting
//! - [`sim`]: per-transmitter hardware impairments, channel effects,
//!   replay spoofing, and labelled scenario generation
//! - [`dataset`]: the ORBD packet-capture file format, filtering and
//!   deterministic splitting
//! - [`anonymize`]: bit-transition shuffling that strips logical-layer
//!   content from training waveforms
//! - [`net`]: the dual-branch weight-shared convolutional encoder,
//!   semi-hard triplet loss, Adam, trainer and checkpointing
//! - [`eval`]: pairwise ROC/AUC, EER, anchored verification, spoofing
//!   discrimination and metadata-sliced reports

pub mod anonymize;
pub mod dataset;
pub mod eval;
pub mod net;
pub mod protocol;
pub mod signal;
pub mod sim;

mod seed;

pub use seed::mix_seed;
