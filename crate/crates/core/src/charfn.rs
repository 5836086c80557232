//! Characteristic-function to probability-mass-function inversion.
//!
//! `F(chi) = sum_n e^{i chi n} p(n)` is sampled on a uniform grid of a power
//! of two and inverted with a forward FFT:
//! `p(n) = (1/N) sum_k F(chi_k) e^{-i n chi_k}`.

use crate::error::{Error, Result};
use crate::C64;
use rustfft::FftPlanner;

/// Inversion output with quality metrics.
#[derive(Debug, Clone)]
pub struct PmfResult {
    /// `p(0..=n_max)`, real parts of the inverted coefficients.
    pub pmf: Vec<f64>,
    /// Largest imaginary residue over the kept coefficients.
    pub max_imag: f64,
    /// Total probability over the kept coefficients.
    pub total_mass: f64,
    /// Number of samples used (power of two, `>= 4 (n_max+1)`).
    pub n_samples: usize,
    /// Set when `total_mass < 1 - 1e-6`: the support was truncated.
    pub truncated: bool,
}

/// Invert a 2pi-periodic characteristic function into `p(0..=n_max)`.
///
/// `n_samples` is rounded up to the next power of two and at least
/// `4 (n_max + 1)`. The function may fail (propagating the evaluation
/// error); a truncation deficit is reported in the result rather than as an
/// error so that callers can retry with a larger `n_max`.
pub fn char_to_pmf<F: FnMut(f64) -> Result<C64>>(
    mut f: F,
    n_max: usize,
    n_samples: usize,
) -> Result<PmfResult> {
    let n = n_samples.max(4 * (n_max + 1)).next_power_of_two();
    let mut buf = Vec::with_capacity(n);
    for k in 0..n {
        let chi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        buf.push(f(chi)?);
    }
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    let inv_n = 1.0 / n as f64;
    let kept = &buf[..=n_max.min(n - 1)];
    let pmf: Vec<f64> = kept.iter().map(|c| c.re * inv_n).collect();
    let max_imag = kept
        .iter()
        .map(|c| (c.im * inv_n).abs())
        .fold(0.0, f64::max);
    let total_mass: f64 = pmf.iter().sum();
    Ok(PmfResult {
        pmf,
        max_imag,
        total_mass,
        n_samples: n,
        truncated: total_mass < 1.0 - 1e-6,
    })
}

/// Sample grid size heuristic: covers the distribution support with margin.
pub fn suggested_samples(mean: f64, q: f64) -> (usize, usize) {
    let spread = (mean * (1.0 + q.abs())).max(1.0).sqrt();
    let n_eff = (mean + 10.0 * spread + 20.0).ceil();
    let n_max = n_eff as usize;
    let n_samples = ((8.0 * n_eff) as usize).next_power_of_two();
    (n_max, n_samples)
}

/// Convenience error for callers that insist on full mass.
pub fn require_mass(r: &PmfResult) -> Result<()> {
    if r.truncated {
        Err(Error::Truncation { mass: r.total_mass })
    } else {
        Ok(())
    }
}
