//! Rational functions of the Laplace variable and residue-based inversion.
//!
//! The transform convention is
//!
//! ```text
//! G(p)  = int_0^inf dx G(x) e^{ipx},
//! G(x)  = int_{-inf+i0}^{inf+i0} dp/(2 pi) e^{-ipx} G(p),
//! ```
//!
//! with the contour running just above the real axis. For `x >= 0` the
//! contour closes in the lower half-plane, so the inverse is `-i` times the
//! sum of residues of `e^{-ipx} G(p)`. A pole at the origin lies below the
//! contour and contributes fully. At `x = 0` the residue sum equals the
//! one-sided limit `G(0+)`.

use crate::error::{Error, Result};
use crate::poly::{series_div, Poly};
use crate::C64;

/// Poles closer than this (relative to their scale) are merged into one
/// confluent cluster and inverted with derivative residues. An exact double
/// root splits by about sqrt(machine epsilon) ~ 1.5e-8 under the companion
/// solver, so the threshold sits safely above that and far below any
/// physical pole separation.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Poles above the contour by more than this (absolute, in units of the rate
/// scale passed to [`PoleSum::from_rational`]) trigger a stability error
/// under [`StabilityPolicy::Strict`].
pub const STABILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityPolicy {
    /// Error out on any pole above the contour. For transforms of decaying
    /// correlators, where an upper pole signals invalid parameters or a bug.
    Strict,
    /// Keep all poles. Counting generating functions legitimately develop
    /// poles above the contour at finite counting field; their growth is
    /// compensated by the coherent prefactor of the assembled observable.
    Lenient,
}

/// A ratio of two complex polynomials in the Laplace variable.
#[derive(Debug, Clone)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Self {
        RationalFn { num, den }
    }

    /// Constructor for transforms that will be inverted: requires decay at
    /// large `|p|`, i.e. `deg num <= deg den - 1`.
    pub fn new_decaying(num: Poly, den: Poly) -> Result<Self> {
        if !num.is_zero() && num.degree() + 1 > den.degree() {
            return Err(Error::InvalidParameter(format!(
                "transform does not decay: deg num = {}, deg den = {}",
                num.degree(),
                den.degree()
            )));
        }
        Ok(RationalFn { num, den })
    }

    pub fn eval(&self, p: C64) -> C64 {
        self.num.eval(p) / self.den.eval(p)
    }

    /// Coefficient of `1/p` in the large-`p` expansion (the residue at
    /// infinity, up to sign). Nonzero only when `deg num = deg den - 1`.
    pub fn leading_tail(&self) -> C64 {
        if self.num.is_zero() || self.num.degree() + 1 != self.den.degree() {
            C64::new(0.0, 0.0)
        } else {
            self.num.leading() / self.den.leading()
        }
    }
}

/// One exponential term of a [`PoleSum`]: `e^{-i pole tau} * poly(tau)` with
/// `poly(tau) = sum_k coeffs[k] tau^k` (confluent clusters carry `k > 0`).
#[derive(Debug, Clone)]
pub struct PoleTerm {
    pub pole: C64,
    pub coeffs: Vec<C64>,
}

/// A time-domain function `sum_j e^{-i p_j tau} poly_j(tau)`, the residue
/// image of a decaying [`RationalFn`]. Evaluation is `O(#poles)`.
#[derive(Debug, Clone)]
pub struct PoleSum {
    pub terms: Vec<PoleTerm>,
}

impl PoleSum {
    /// Residue extraction. `rate_scale` sets the absolute stability
    /// threshold (use the relaxation rate).
    pub fn from_rational(f: &RationalFn, policy: StabilityPolicy, rate_scale: f64) -> Result<Self> {
        let f = RationalFn::new_decaying(f.num.clone(), f.den.clone())?;
        let mut roots = f.den.roots()?;
        if let StabilityPolicy::Strict = policy {
            for &r in &roots {
                if r.im > STABILITY_TOL * (rate_scale + r.norm()) {
                    return Err(Error::StabilityViolation { pole: r });
                }
            }
        }
        // cluster near-coincident roots
        roots.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut clusters: Vec<Vec<C64>> = Vec::new();
        'outer: for r in roots {
            for cl in clusters.iter_mut() {
                let c = cl.iter().sum::<C64>() / cl.len() as f64;
                if (r - c).norm() <= CLUSTER_TOL * (1.0 + c.norm()) {
                    cl.push(r);
                    continue 'outer;
                }
            }
            clusters.push(vec![r]);
        }
        let lead = f.den.leading();
        let minus_i = -C64::i();
        let mut terms = Vec::with_capacity(clusters.len());
        for cl in &clusters {
            let m = cl.len();
            let center = cl.iter().sum::<C64>() / m as f64;
            if m == 1 {
                // simple pole: w = num(r) / prod_{other roots}(r - r') / lead
                let mut dprod = lead;
                for other in &clusters {
                    if std::ptr::eq(other, cl) {
                        continue;
                    }
                    for &r2 in other {
                        dprod *= center - r2;
                    }
                }
                terms.push(PoleTerm {
                    pole: center,
                    coeffs: vec![minus_i * f.num.eval(center) / dprod],
                });
            } else {
                // confluent cluster treated as one pole of multiplicity m at
                // the centroid: residue of e^{-ip tau} num/den is
                //   e^{-ic tau} sum_k (-i tau)^k / k! * g_{m-1-k}
                // with g the Taylor series of num/(den/(p-c)^m) at c.
                let mut defl = Poly::constant(lead);
                for other in &clusters {
                    if std::ptr::eq(other, cl) {
                        continue;
                    }
                    for &r2 in other {
                        defl = defl.mul_linear(r2);
                    }
                }
                let num_series = f.num.shift(center);
                let den_series = defl.shift(center);
                let g = series_div(&num_series, &den_series, m);
                let mut coeffs = vec![C64::new(0.0, 0.0); m];
                let mut fact = 1.0;
                let mut ipow = C64::new(1.0, 0.0);
                for (k, c) in coeffs.iter_mut().enumerate() {
                    if k > 0 {
                        fact *= k as f64;
                        ipow *= minus_i;
                    }
                    *c = minus_i * ipow * g[m - 1 - k] / fact;
                }
                terms.push(PoleTerm {
                    pole: center,
                    coeffs,
                });
            }
        }
        Ok(PoleSum { terms })
    }

    pub fn eval(&self, tau: f64) -> C64 {
        let (m, s) = self.eval_scaled(tau);
        m * s.exp()
    }

    /// Evaluate as `mantissa * e^{shift}` with a real shift, so that counting
    /// kernels whose poles lie above the contour can be combined with the
    /// compensating coherent prefactor without overflow.
    pub fn eval_scaled(&self, tau: f64) -> (C64, f64) {
        let shift = self
            .terms
            .iter()
            .map(|t| t.pole.im * tau)
            .fold(0.0f64, f64::max);
        let mut acc = C64::new(0.0, 0.0);
        for t in &self.terms {
            let mut poly = C64::new(0.0, 0.0);
            let mut pw = C64::new(1.0, 0.0);
            for &c in &t.coeffs {
                poly += c * pw;
                pw *= tau;
            }
            let expo = -C64::i() * t.pole * tau - shift;
            acc += poly * expo.exp();
        }
        (acc, shift)
    }

    /// Add a constant offset (a pole at the origin with that weight).
    pub fn add_constant(&mut self, c: C64) {
        self.terms.push(PoleTerm {
            pole: C64::new(0.0, 0.0),
            coeffs: vec![c],
        });
    }

    pub fn scale(&mut self, s: C64) {
        for t in &mut self.terms {
            for c in &mut t.coeffs {
                *c *= s;
            }
        }
    }
}

/// Inverse Laplace transform by residues: `int dp/2pi e^{-ip tau} f(p)`
/// closed in the lower half-plane. Errors if a pole lies above the contour
/// (see [`StabilityPolicy::Strict`]) or the transform fails to decay.
pub fn inv_laplace(f: &RationalFn, tau: f64, rate_scale: f64) -> Result<C64> {
    Ok(PoleSum::from_rational(f, StabilityPolicy::Strict, rate_scale)?.eval(tau))
}
