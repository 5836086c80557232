//! Mean fields, reflection/transmission amplitudes, first-order coherence,
//! and the transient/stationary Mollow fluorescence spectrum.
//!
//! Spectra are reported against the offset `nu = omega - k0`; the overall
//! `k0` prefactor of the printed power spectrum is an absolute scale that
//! drops out of every shape comparison and is carried as metadata by
//! callers.

use crate::correlators::{c0_poly, m0_poly, r0_poly, Correlators};
use crate::error::{Error, Result};
use crate::params::{DerivedParams, SystemParams};
use crate::poly::Poly;
use crate::quadrature::adaptive_simpson;
use crate::{WaitingTime, C64};

/// Stationary reflection/transmission amplitudes of the mean field.
#[derive(Debug, Clone, Copy)]
pub struct Amplitudes {
    pub r_amp: C64,
    pub t_amp: C64,
}

impl Amplitudes {
    pub fn reflect_power(&self) -> f64 {
        self.r_amp.norm_sqr()
    }

    pub fn transmit_power(&self) -> f64 {
        self.t_amp.norm_sqr()
    }
}

/// `r = -i gamma (delta - i gamma) / (rabi^2/2 + delta^2 + gamma^2)`,
/// `t = 1 + r`.
pub fn amplitudes(params: &SystemParams) -> Amplitudes {
    let g = params.gamma;
    let den = params.rabi * params.rabi / 2.0 + params.q_abs2();
    let r_amp = -C64::i() * g * C64::new(params.delta, -g) / den;
    Amplitudes {
        r_amp,
        t_amp: 1.0 + r_amp,
    }
}

/// Scattered-field first-order coherence
/// `g~(T, tau) = |lambda|^2 e^{-i k0 tau} [R(T) M(tau) + (C*(T) - R(T)) C(tau)]`.
pub fn g1_tilde(params: &SystemParams, corr: &Correlators, t: WaitingTime, tau: f64) -> C64 {
    let derived = params.derive();
    let (rt, ct) = waiting_values(corr, &derived, t);
    let phase = (-C64::i() * params.k0 * tau).exp();
    derived.lambda_abs2 * phase * (rt * corr.m(tau) + (ct.conj() - rt) * corr.c(tau))
}

fn waiting_values(corr: &Correlators, derived: &DerivedParams, t: WaitingTime) -> (C64, C64) {
    match t {
        WaitingTime::Infinite => {
            let s = C64::new(derived.s_inf, 0.0);
            (s, s)
        }
        // R(0) = C(0) = 0 identically; skip the residue sum's roundoff
        WaitingTime::Finite(0.0) => (C64::new(0.0, 0.0), C64::new(0.0, 0.0)),
        WaitingTime::Finite(tw) => (corr.r(tw), corr.c(tw)),
    }
}

/// Spectrum evaluator holding the closed-form ingredients.
pub struct Spectrum {
    pub params: SystemParams,
    pub derived: DerivedParams,
    pub corr: Correlators,
    r0: Poly,
    m0: Poly,
    c0: Poly,
}

/// Inelastic spectrum on a grid, with its two kernel components.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Offsets `omega - k0` in units of `gamma`.
    pub nu: Vec<f64>,
    /// `p_inel(omega, T)` (or the `T0` average).
    pub p_inel: Vec<f64>,
    /// The `M0`-weighted component.
    pub m_part: Vec<f64>,
    /// The `C0`-weighted component.
    pub c_part: Vec<f64>,
    /// Waiting time, or `None` when this is a `T0` average.
    pub waiting: Option<WaitingTime>,
    /// Averaging horizon, when applicable.
    pub t0: Option<f64>,
}

impl Spectrum {
    pub fn new(params: &SystemParams) -> Result<Self> {
        let derived = params.derive();
        Ok(Spectrum {
            params: *params,
            derived,
            corr: Correlators::new(params)?,
            r0: r0_poly(params),
            m0: m0_poly(params),
            c0: c0_poly(params, &derived),
        })
    }

    fn p_inel_parts(&self, nu: f64, rt: C64, ct: C64) -> (f64, f64) {
        let g = self.params.gamma;
        let l2 = self.derived.lambda_abs2;
        let p = C64::new(nu, 0.0);
        let r0 = self.r0.eval(p);
        let norm = 2.0 * std::f64::consts::PI * (g + l2);
        let m_part = (l2 * l2 / norm) * (rt * C64::i() * self.m0.eval(p) / r0).re;
        let c_part = -(l2 * g / norm) * ((ct.conj() - rt) * C64::i() * self.c0.eval(p) / r0).re;
        (m_part, c_part)
    }

    /// Transient inelastic spectrum `p_inel(omega, T)` at offset `nu`.
    pub fn mollow_transient(&self, nu: f64, t: WaitingTime) -> f64 {
        let (rt, ct) = waiting_values(&self.corr, &self.derived, t);
        let (m, c) = self.p_inel_parts(nu, rt, ct);
        m + c
    }

    /// Stationary Mollow spectrum shape (the `T -> infinity` limit).
    pub fn mollow_stationary(&self, nu: f64) -> f64 {
        self.mollow_transient(nu, WaitingTime::Infinite)
    }

    /// Spectrum averaged over waiting times `T in [0, T0]`.
    pub fn mollow_averaged(&self, nu: f64, t0: f64) -> Result<f64> {
        if t0 <= 0.0 || !t0.is_finite() {
            return Err(Error::InvalidParameter("T0 must be positive".into()));
        }
        let scale = self.mollow_stationary(0.0).abs().max(1e-30);
        let v = adaptive_simpson(
            &|t| C64::new(self.mollow_transient(nu, WaitingTime::Finite(t)), 0.0),
            0.0,
            t0,
            1e-10 * scale * t0,
            32,
        )?;
        Ok(v.re / t0)
    }

    /// Evaluate the spectrum on a grid. `t0 = Some(h)` averages over the
    /// waiting time instead of using a fixed one.
    pub fn grid(&self, nus: &[f64], t: WaitingTime, t0: Option<f64>) -> Result<SpectrumResult> {
        let mut p_inel = Vec::with_capacity(nus.len());
        let mut m_part = Vec::with_capacity(nus.len());
        let mut c_part = Vec::with_capacity(nus.len());
        match t0 {
            Some(h) => {
                for &nu in nus {
                    let v = self.mollow_averaged(nu, h)?;
                    p_inel.push(v);
                    // component split of the average, by the same quadrature
                    let m = adaptive_simpson(
                        &|tw| {
                            let (rt, ct) =
                                waiting_values(&self.corr, &self.derived, WaitingTime::Finite(tw));
                            C64::new(self.p_inel_parts(nu, rt, ct).0, 0.0)
                        },
                        0.0,
                        h,
                        1e-9 * h,
                        32,
                    )?
                    .re / h;
                    m_part.push(m);
                    c_part.push(v - m);
                }
            }
            None => {
                let (rt, ct) = waiting_values(&self.corr, &self.derived, t);
                for &nu in nus {
                    let (m, c) = self.p_inel_parts(nu, rt, ct);
                    p_inel.push(m + c);
                    m_part.push(m);
                    c_part.push(c);
                }
            }
        }
        Ok(SpectrumResult {
            nu: nus.to_vec(),
            p_inel,
            m_part,
            c_part,
            waiting: if t0.is_none() { Some(t) } else { None },
            t0,
        })
    }

    /// Default offset grid `[-2 rabi - 6 gamma, 2 rabi + 6 gamma]`.
    pub fn default_grid(&self, points: usize) -> Vec<f64> {
        let half = 2.0 * self.params.rabi + 6.0 * self.params.gamma;
        let n = points.max(2);
        (0..n)
            .map(|k| -half + 2.0 * half * k as f64 / (n - 1) as f64)
            .collect()
    }
}
