//! Quadrature oracle for the inverse Laplace transform.
//!
//! Integrates `int dp/2pi e^{-ip tau} f(p)` along the horizontal contour
//! `Im p = eps` by adaptive panels. Used in tests and cross-checks against
//! the residue route of [`crate::rational`].
//!
//! A rational transform decays only like `1/|p|`, too slowly to truncate.
//! Before integrating, the large-`p` behavior of `f` is matched by a short
//! stack of reference terms `a_k / (p + i s)^k`, whose inverses are the
//! textbook `(-i tau)^{k-1} e^{-s tau} / (k-1)!`; the regularized remainder
//! decays like `|p|^{-(K+1)}` and its truncated tail is bounded explicitly.

use crate::error::{Error, Result};
use crate::poly::{series_div, Poly};
use crate::quadrature::adaptive_simpson;
use crate::rational::RationalFn;
use crate::C64;

/// Number of matched tail terms.
const TAIL_TERMS: usize = 5;

/// Contour height as a fraction of the rate scale.
const EPS_FRACTION: f64 = 0.01;

/// Inverse Laplace transform of a decaying rational function by contour
/// quadrature. `rate_scale` plays the role of the relaxation rate: the
/// contour runs at `Im p = rate_scale / 100`.
///
/// At `tau = 0` the matched reference terms carry the arc contribution of
/// the closed contour, so the returned value is the one-sided limit
/// `f(0+)`, consistent with the residue convention.
pub fn inv_laplace_quad(f: &RationalFn, tau: f64, rate_scale: f64) -> Result<C64> {
    let f = RationalFn::new_decaying(f.num.clone(), f.den.clone())
        .map_err(|_| Error::QuadratureFailure("transform does not decay".into()))?;
    let eps = EPS_FRACTION * rate_scale;
    let s = rate_scale; // decay rate of the reference stack
    let shift = C64::new(0.0, -s);

    // Large-p expansion of f around the reference pole: write q = p + i s and
    // expand num(q - i s)/den(q - i s) in powers of 1/q by dividing the
    // reversed coefficient sequences as power series.
    let num_s = Poly::new(f.num.shift(shift));
    let den_s = Poly::new(f.den.shift(shift));
    let dn = den_s.degree();
    let mut num_rev: Vec<C64> = num_s.coeffs().iter().rev().cloned().collect();
    // align: f = (num_rev as series in 1/q) * q^{deg num} / (den_rev * q^{deg den})
    // pad numerator so both reversed series start at q^0 coefficient of q^{dn}
    let pad = dn - num_s.degree();
    let mut padded = vec![C64::new(0.0, 0.0); pad];
    padded.append(&mut num_rev);
    let den_rev: Vec<C64> = den_s.coeffs().iter().rev().cloned().collect();
    // series of f in u = 1/q: first TAIL_TERMS coefficients a_1..a_K with
    // f = sum_k a_k u^k (a_0 = 0 since f decays)
    let ser = series_div(&padded, &den_rev, TAIL_TERMS + 1);
    let tail: Vec<C64> = ser.into_iter().take(TAIL_TERMS + 1).collect();

    // regularized integrand
    let reg = |p: C64| -> C64 {
        let q = p + C64::i() * s;
        let mut acc = f.eval(p);
        let mut qk = q;
        for a in tail.iter().skip(1) {
            acc -= a / qk;
            qk *= q;
        }
        acc
    };

    // Tail bound: |reg(p)| ~ |a_{K+1}| / |p|^{K+1}; choose P so the two tail
    // integrals are below 1e-10 of scale.
    let a_last = tail
        .last()
        .map(|c| c.norm())
        .unwrap_or(0.0)
        .max(f.num.coeff_scale() / f.den.leading().norm());
    let k = TAIL_TERMS as f64;
    let p_max = (a_last / 1e-10).powf(1.0 / k).max(30.0 * rate_scale);
    if !p_max.is_finite() {
        return Err(Error::QuadratureFailure(
            "tail bound estimate diverged".into(),
        ));
    }

    let integrand = |x: f64| -> C64 {
        let p = C64::new(x, eps);
        (-C64::i() * p * tau).exp() * reg(p)
    };
    // split at 0 and at moderate radii so the adaptive rule finds the poles
    let mut total = C64::new(0.0, 0.0);
    let knots = [
        -p_max,
        -30.0 * rate_scale,
        -5.0 * rate_scale,
        0.0,
        5.0 * rate_scale,
        30.0 * rate_scale,
        p_max,
    ];
    for w in knots.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        total += adaptive_simpson(&integrand, w[0], w[1], 1e-12 * (1.0 + a_last), 40)?;
    }
    total /= 2.0 * std::f64::consts::PI;

    // add back the exact inverses of the reference terms:
    // IL[1/(p+is)^k](tau) = -i (-i tau)^{k-1} e^{-s tau} / (k-1)!
    let mut fact = 1.0;
    let mut pw = C64::new(1.0, 0.0);
    let e = (-s * tau).exp();
    for (k, a) in tail.iter().enumerate().skip(1) {
        if k > 1 {
            fact *= (k - 1) as f64;
            pw *= -C64::i() * tau;
        }
        total += a * (-C64::i()) * pw * e / fact;
    }
    Ok(total)
}
