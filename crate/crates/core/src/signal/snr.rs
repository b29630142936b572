//! Periodogram-based SNR estimation.

use super::{bin_to_frac, fft_forward, IqBuffer, SignalError, RRC_ALPHA};

/// Reported SNR is clamped to this range.
pub const SNR_FLOOR_DB: f64 = -60.0;
pub const SNR_CEIL_DB: f64 = 80.0;

/// Estimate the SNR of an RRC-shaped signal in dB.
///
/// The shaped signal occupies |f| <= (1 + alpha) / (2 sps) of the sample
/// rate, so the outermost part of the band carries noise only. The noise
/// floor is measured there from a single periodogram, extrapolated across
/// the full band, and subtracted from the total power; SNR is the ratio of
/// the remainder to the full-band noise power.
pub fn estimate_snr(buf: &IqBuffer, sps: usize) -> Result<f64, SignalError> {
    if sps == 0 {
        return Err(SignalError::InvalidParameter("sps must be positive".into()));
    }
    let min = 4 * sps;
    if buf.len() < min {
        return Err(SignalError::BufferTooShort {
            len: buf.len(),
            min,
        });
    }

    let l = buf.len();
    let mut spec = buf.samples.clone();
    fft_forward(l).process(&mut spec);

    // guard band between the occupied edge and the noise window
    let occupied = 0.5 * (1.0 + RRC_ALPHA) / sps as f64;
    let noise_lo = (occupied + 0.04).min(0.45);

    let norm = 1.0 / (l as f64 * l as f64);
    let mut noise_sum = 0.0;
    let mut noise_bins = 0usize;
    let mut total = 0.0;
    for (k, s) in spec.iter().enumerate() {
        let p = s.norm_sqr() * norm;
        total += p;
        if bin_to_frac(k, l).abs() >= noise_lo {
            noise_sum += p;
            noise_bins += 1;
        }
    }
    if noise_bins == 0 {
        return Err(SignalError::InvalidParameter(
            "buffer too short for a noise window".into(),
        ));
    }

    let noise_total = noise_sum / noise_bins as f64 * l as f64;
    let signal = total - noise_total;
    let snr = if noise_total <= 0.0 {
        SNR_CEIL_DB
    } else {
        10.0 * (signal.max(total * 1e-9) / noise_total).log10()
    };
    Ok(snr.clamp(SNR_FLOOR_DB, SNR_CEIL_DB))
}

/// Add complex white Gaussian noise calibrated so that signal power over
/// noise power equals `snr_db`. Infinite `snr_db` returns the input as-is.
pub fn add_awgn(buf: &IqBuffer, snr_db: f64, seed: u64) -> IqBuffer {
    use rand::SeedableRng;
    use rand_distr::{Distribution, StandardNormal};

    if snr_db.is_infinite() && snr_db > 0.0 {
        return buf.clone();
    }
    let p = buf.power();
    let noise_power = p / 10f64.powf(snr_db / 10.0);
    let sigma = (noise_power / 2.0).sqrt();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let samples = buf
        .samples
        .iter()
        .map(|s| {
            let ni: f64 = StandardNormal.sample(&mut rng);
            let nq: f64 = StandardNormal.sample(&mut rng);
            s + num_complex::Complex64::new(ni * sigma, nq * sigma)
        })
        .collect();
    IqBuffer {
        samples,
        sample_rate: buf.sample_rate,
    }
}
