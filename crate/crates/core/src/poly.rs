//! Complex polynomials with companion-matrix root finding.

use crate::error::{Error, Result};
use crate::C64;
use nalgebra::{Complex, DMatrix};

/// Relative tolerance for trimming trailing (leading-degree) zero coefficients.
pub const TRIM_TOL: f64 = 1e-14;

/// A polynomial with complex coefficients, ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Poly::new(vec![c])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut p = Poly::one();
        for &r in roots {
            p = p.mul(&Poly::new(vec![-r, C64::new(1.0, 0.0)]));
        }
        p
    }

    fn trim(&mut self) {
        // A leading coefficient is spurious when it is cancellation dust
        // relative to its neighbors; a global max-coefficient scale would
        // wrongly strip legitimate small leads of wide-scale polynomials.
        loop {
            let n = self.coeffs.len();
            if n <= 1 {
                break;
            }
            let local = self.coeffs[n.saturating_sub(3)..n - 1]
                .iter()
                .map(|c| c.norm())
                .fold(1.0f64, f64::max);
            if self.coeffs[n - 1].norm() <= TRIM_TOL * local {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.len() == 1 && self.coeffs[0].norm() == 0.0 {
            self.coeffs.clear();
        }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().unwrap_or(&C64::new(0.0, 0.0))
    }

    pub fn eval(&self, p: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * p + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (k as f64 + 1.0))
                .collect(),
        )
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Multiply by the monomial `(p - r)`.
    pub fn mul_linear(&self, r: C64) -> Poly {
        self.mul(&Poly::new(vec![-r, C64::new(1.0, 0.0)]))
    }

    /// Synthetic division by `(p - r)`; returns the quotient, dropping the
    /// remainder (use only when `r` is a root or the remainder is irrelevant).
    pub fn deflate(&self, r: C64) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let n = self.coeffs.len();
        let mut q = vec![C64::new(0.0, 0.0); n - 1];
        let mut carry = self.coeffs[n - 1];
        for k in (0..n - 1).rev() {
            q[k] = carry;
            carry = self.coeffs[k] + carry * r;
        }
        Poly::new(q)
    }

    /// Taylor coefficients around `a`: returns `c` with
    /// `p(x) = sum_k c[k] (x-a)^k`.
    pub fn shift(&self, a: C64) -> Vec<C64> {
        // repeated in-place synthetic division by (x - a)
        let mut w = self.coeffs.clone();
        let n = w.len();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            for k in (j..n - 1).rev() {
                let t = w[k + 1] * a;
                w[k] += t;
            }
            out[j] = w[j];
        }
        out
    }

    /// Roots with multiplicity, via the companion matrix of the monic-scaled
    /// polynomial (complex Schur), each refined by one or two Newton steps.
    pub fn roots(&self) -> Result<Vec<C64>> {
        if self.degree() == 0 || self.is_zero() {
            return Err(Error::DegreeZero);
        }
        let n = self.degree();
        let lead = self.leading();
        // variable scaling p = s * y maps coefficients to c_k s^k; choose s so
        // the extreme coefficients balance, taming large-|root| cases.
        let c0n = self.coeffs[0].norm();
        let s = if c0n > 0.0 {
            (c0n / lead.norm()).powf(1.0 / n as f64).max(1e-8)
        } else {
            1.0
        };
        let mut monic: Vec<C64> = (0..n)
            .map(|k| self.coeffs[k] / lead * s.powi(k as i32 - n as i32))
            .collect();
        // companion matrix in the scaled variable
        let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
        for (k, c) in monic.iter_mut().enumerate() {
            m[(k, n - 1)] = Complex::new(-c.re, -c.im);
        }
        for k in 1..n {
            m[(k, k - 1)] = Complex::new(1.0, 0.0);
        }
        let t = m.schur().unpack().1;
        let deriv = self.derivative();
        let mut roots = Vec::with_capacity(n);
        for k in 0..n {
            let y = t[(k, k)];
            let mut r = C64::new(y.re, y.im) * s;
            // Newton polish, guarded: near multiple roots the residual is
            // pure cancellation noise over a tiny derivative, so a step is
            // only accepted when it actually reduces |p(r)|.
            let mut res = self.eval(r).norm();
            for _ in 0..2 {
                if res == 0.0 {
                    break;
                }
                let d = deriv.eval(r);
                if d.norm() == 0.0 {
                    break;
                }
                let step = self.eval(r) / d;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                let cand = r - step;
                let cand_res = self.eval(cand).norm();
                if cand_res < res {
                    r = cand;
                    res = cand_res;
                } else {
                    break;
                }
            }
            roots.push(r);
        }
        Ok(roots)
    }

    /// Max coefficient magnitude, used in residual tolerances.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Divide two power series to `len` terms: `num / den` with `den[0] != 0`.
pub fn series_div(num: &[C64], den: &[C64], len: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); len];
    let d0 = den[0];
    for k in 0..len {
        let mut acc = if k < num.len() {
            num[k]
        } else {
            C64::new(0.0, 0.0)
        };
        for j in 1..=k {
            let dj = if j < den.len() {
                den[j]
            } else {
                C64::new(0.0, 0.0)
            };
            acc -= dj * out[k - j];
        }
        out[k] = acc / d0;
    }
    out
}


#[cfg(test)]
mod refinement_tests {
    use super::*;
    use nalgebra::{Complex, DMatrix};

    #[test]
    fn polish_improves_raw_eigenvalues() {
        // polished roots reduce |p(root)| by >= 1e3 against the raw
        // companion eigenvalues, or are already at tolerance
        let p = Poly::from_roots(&[
            C64::new(900.0, -3.0),
            C64::new(-1.1, -0.2),
            C64::new(0.004, -0.001),
            C64::new(12.0, -40.0),
        ]);
        let n = p.degree();
        let lead = p.leading();
        let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
        for k in 0..n {
            let c = p.coeffs()[k] / lead;
            m[(k, n - 1)] = Complex::new(-c.re, -c.im);
        }
        for k in 1..n {
            m[(k, k - 1)] = Complex::new(1.0, 0.0);
        }
        let t = m.schur().unpack().1;
        let raw: Vec<C64> = (0..n)
            .map(|k| C64::new(t[(k, k)].re, t[(k, k)].im))
            .collect();
        let polished = p.roots().unwrap();
        let scale = p.coeff_scale();
        for r in &polished {
            // match the nearest raw eigenvalue
            let raw_r = raw
                .iter()
                .min_by(|a, b| (*a - r).norm().partial_cmp(&(*b - r).norm()).unwrap())
                .unwrap();
            let res_raw = p.eval(*raw_r).norm();
            let res_pol = p.eval(*r).norm();
            let tol = 1e-10 * scale * r.norm().max(1.0).powi(n as i32);
            assert!(
                res_pol <= res_raw / 1e3 || res_pol <= tol,
                "root {r}: polished {res_pol:.3e} vs raw {res_raw:.3e} (tol {tol:.1e})"
            );
        }
    }
}
