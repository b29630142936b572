//! Root-raised-cosine pulse shaping.

use super::SignalError;

/// A unit-energy root-raised-cosine filter.
///
/// `span_symbols` is the total span of the impulse response, so the tap
/// count is `span_symbols * samples_per_symbol + 1` (odd, symmetric about
/// the center tap).
#[derive(Debug, Clone, PartialEq)]
pub struct RrcFilter {
    pub taps: Vec<f64>,
    pub alpha: f64,
    pub span_symbols: usize,
    pub samples_per_symbol: usize,
}

impl RrcFilter {
    /// Index of the center (peak) tap.
    pub fn center(&self) -> usize {
        self.taps.len() / 2
    }
}

/// Design a unit-energy RRC filter.
///
/// The closed form has removable singularities at `t = 0` and
/// `|t| = Ts / (4 alpha)`; both are replaced by their limits.
pub fn design_rrc(alpha: f64, span_symbols: usize, sps: usize) -> Result<RrcFilter, SignalError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(SignalError::InvalidParameter(format!(
            "rrc roll-off must be in (0, 1], got {alpha}"
        )));
    }
    if span_symbols < 4 {
        return Err(SignalError::InvalidParameter(format!(
            "rrc span must be at least 4 symbols, got {span_symbols}"
        )));
    }
    if sps < 2 {
        return Err(SignalError::InvalidParameter(format!(
            "samples per symbol must be at least 2, got {sps}"
        )));
    }

    let n_taps = span_symbols * sps + 1;
    let half = (n_taps - 1) as f64 / 2.0;
    let pi = std::f64::consts::PI;
    let mut taps = Vec::with_capacity(n_taps);
    for i in 0..n_taps {
        // tap time in symbol periods
        let t = (i as f64 - half) / sps as f64;
        let h = if t == 0.0 {
            1.0 + alpha * (4.0 / pi - 1.0)
        } else if (t.abs() - 1.0 / (4.0 * alpha)).abs() < 1e-12 {
            (alpha / 2.0_f64.sqrt())
                * ((1.0 + 2.0 / pi) * (pi / (4.0 * alpha)).sin()
                    + (1.0 - 2.0 / pi) * (pi / (4.0 * alpha)).cos())
        } else {
            let num = (pi * t * (1.0 - alpha)).sin()
                + 4.0 * alpha * t * (pi * t * (1.0 + alpha)).cos();
            let den = pi * t * (1.0 - (4.0 * alpha * t).powi(2));
            num / den
        };
        taps.push(h);
    }

    // unit energy
    let energy: f64 = taps.iter().map(|h| h * h).sum();
    let g = 1.0 / energy.sqrt();
    for h in &mut taps {
        *h *= g;
    }

    Ok(RrcFilter {
        taps,
        alpha,
        span_symbols,
        samples_per_symbol: sps,
    })
}
