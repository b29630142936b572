//! Band-limited interpolation by frequency-domain zero padding.

use super::{fft_forward, fft_inverse, IqBuffer, SignalError};
use num_complex::Complex64;

/// Interpolate a buffer by an integer factor without adding spectral
/// content: the FFT of the input is embedded in a longer spectrum, the
/// Nyquist bin (for even lengths) is split between its two images, and the
/// result is transformed back. Output length is exactly `len * factor`.
pub fn interpolate(buf: &IqBuffer, factor: usize) -> Result<IqBuffer, SignalError> {
    if factor == 0 {
        return Err(SignalError::InvalidParameter(
            "interpolation factor must be at least 1".into(),
        ));
    }
    if factor == 1 {
        return Ok(buf.clone());
    }
    let l = buf.len();
    let lb = l * factor;

    let mut spec = buf.samples.clone();
    fft_forward(l).process(&mut spec);

    let mut big = vec![Complex64::new(0.0, 0.0); lb];
    if l % 2 == 0 {
        let half = l / 2;
        big[..half].copy_from_slice(&spec[..half]);
        // bins above Nyquist are negative frequencies
        big[lb - (half - 1)..].copy_from_slice(&spec[half + 1..]);
        let nyq = spec[half] * 0.5;
        big[half] = nyq;
        big[lb - half] = nyq;
    } else {
        let half = l / 2;
        big[..=half].copy_from_slice(&spec[..=half]);
        big[lb - half..].copy_from_slice(&spec[half + 1..]);
    }

    fft_inverse(lb).process(&mut big);
    let scale = 1.0 / l as f64;
    for s in &mut big {
        *s *= scale;
    }

    IqBuffer::new(big, buf.sample_rate * factor as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::bin_to_frac;

    fn tone(len: usize, bin: usize, rate: f64) -> IqBuffer {
        let samples = (0..len)
            .map(|n| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * bin as f64 * n as f64 / len as f64)
            })
            .collect();
        IqBuffer::new(samples, rate).unwrap()
    }

    #[test]
    fn length_192_times_64_is_12288() {
        let buf = tone(192, 5, 9600.0);
        let out = interpolate(&buf, 64).unwrap();
        assert_eq!(out.len(), 12288);
        assert_eq!(out.sample_rate, 9600.0 * 64.0);
    }

    #[test]
    fn factor_one_is_identity() {
        let buf = tone(64, 3, 9600.0);
        let out = interpolate(&buf, 1).unwrap();
        for (a, b) in out.samples.iter().zip(&buf.samples) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn constant_buffer_stays_constant() {
        let c = Complex64::new(0.3, -0.7);
        let buf = IqBuffer::new(vec![c; 50], 1000.0).unwrap();
        let out = interpolate(&buf, 8).unwrap();
        for s in &out.samples {
            assert!((s - c).norm() < 1e-12);
        }
    }

    #[test]
    fn pure_tone_stays_pure() {
        // FFT oracle: the interpolated tone keeps its frequency and any
        // spurious component stays below -60 dBc.
        let len = 192;
        let bin = 7;
        let factor = 64;
        let buf = tone(len, bin, 9600.0);
        let f0 = bin as f64 / len as f64 * 9600.0;

        let out = interpolate(&buf, factor).unwrap();
        let lb = out.len();
        let mut spec = out.samples.clone();
        fft_forward(lb).process(&mut spec);

        let (peak_bin, peak_pow) = spec
            .iter()
            .enumerate()
            .map(|(k, s)| (k, s.norm_sqr()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let f_peak = bin_to_frac(peak_bin, lb) * out.sample_rate;
        assert!((f_peak - f0).abs() < 1e-6, "tone moved: {f_peak} vs {f0}");

        let worst_spur = spec
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != peak_bin)
            .map(|(_, s)| s.norm_sqr())
            .fold(0.0f64, f64::max);
        let dbc = 10.0 * (worst_spur / peak_pow).log10();
        assert!(dbc < -60.0, "spur at {dbc} dBc");
    }

    #[test]
    fn odd_length_round_trip() {
        let buf = tone(81, 4, 1000.0);
        let out = interpolate(&buf, 3).unwrap();
        assert_eq!(out.len(), 243);
        // decimating back recovers the input
        for (k, s) in buf.samples.iter().enumerate() {
            assert!((out.samples[k * 3] - s).norm() < 1e-9);
        }
    }

    #[test]
    fn factor_zero_rejected() {
        let buf = tone(16, 1, 1000.0);
        assert!(interpolate(&buf, 0).is_err());
    }
}
