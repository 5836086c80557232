//! Physical parameters, derived coupling quantities, and the dressed
//! single-photon propagators with their pole pair.
//!
//! Displacement arguments are dimensionless throughout: a shift `v* = zeta *
//! alpha` is passed as `zeta`, with the pulse amplitude `alpha` fixed real
//! non-negative (its phase is observable-neutral, see [`DerivedParams`]).

use crate::error::{Error, Result};
use crate::C64;

/// Relative tolerance below which a pole pair is treated as confluent and the
/// propagators switch to their removable-singularity limits.
pub const CONFLUENT_TOL: f64 = 1e-10;

/// Physical inputs. Rates in units of `gamma`, times in `1/gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Detuning of the carrier from the (shifted) emitter transition.
    pub delta: f64,
    /// Relaxation rate; sets the unit scale. Strictly positive.
    pub gamma: f64,
    /// Rabi frequency of the drive, `rabi^2 = 8 gamma |alpha|^2 / L`.
    pub rabi: f64,
    /// Carrier frequency. Enters only spectral phases and offsets.
    pub k0: f64,
    /// Photon density of the even-mode pulse, `|alpha|^2 / L`.
    pub pulse_density: f64,
}

impl SystemParams {
    pub fn new(delta: f64, gamma: f64, rabi: f64, k0: f64) -> Result<Self> {
        if gamma <= 0.0 || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma must be finite and positive, got {gamma}"
            )));
        }
        if rabi < 0.0 || !rabi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rabi must be finite and non-negative, got {rabi}"
            )));
        }
        if !delta.is_finite() || !k0.is_finite() {
            return Err(Error::InvalidParameter(
                "delta and k0 must be finite".into(),
            ));
        }
        Ok(Self {
            delta,
            gamma,
            rabi,
            k0,
            pulse_density: rabi * rabi / (8.0 * gamma),
        })
    }

    /// `delta + i gamma`, the complex pole of the bare propagator.
    pub fn q(&self) -> C64 {
        C64::new(self.delta, self.gamma)
    }

    /// `delta^2 + gamma^2`.
    pub fn q_abs2(&self) -> f64 {
        self.delta * self.delta + self.gamma * self.gamma
    }

    pub fn derive(&self) -> DerivedParams {
        DerivedParams::from(self)
    }
}

/// Coupling quantities derived from [`SystemParams`].
///
/// Phase convention: `alpha` is real non-negative. Every reported observable
/// depends on the pulse only through `|alpha|^2` or the combination
/// `lambda v*` with `v` proportional to `alpha`, so the choice is free.
#[derive(Debug, Clone, Copy)]
pub struct DerivedParams {
    /// `|lambda|^2 = gamma rabi^2 / (2 (delta^2 + gamma^2))`.
    pub lambda_abs2: f64,
    /// Weight of the tail state, `w = |lambda|^2 / (2 gamma)`.
    pub w: f64,
    /// `lambda = -2 i gamma alpha / ((delta + i gamma) sqrt(L))` with the
    /// `alpha`-real phase convention; `|lambda|^2 = lambda_abs2`.
    pub lambda: C64,
    /// `lambda alpha / sqrt(L) = -2 i gamma (|alpha|^2/L) / (delta + i gamma)`,
    /// the only way `lambda` enters time-domain formulas.
    pub lambda_alpha: C64,
    /// Stationary correlator value `gamma / (gamma + |lambda|^2)`.
    pub s_inf: f64,
}

impl From<&SystemParams> for DerivedParams {
    fn from(p: &SystemParams) -> Self {
        let q = p.q();
        let lambda_abs2 = p.gamma * p.rabi * p.rabi / (2.0 * p.q_abs2());
        let dens = p.pulse_density;
        // alpha real >= 0: lambda carries the phase of -i/(delta + i gamma).
        let lambda = -C64::i() * 2.0 * p.gamma * dens.sqrt() / q;
        let lambda_alpha = -C64::i() * 2.0 * p.gamma * dens / q;
        DerivedParams {
            lambda_abs2,
            w: lambda_abs2 / (2.0 * p.gamma),
            lambda,
            lambda_alpha,
            s_inf: p.gamma / (p.gamma + lambda_abs2),
        }
    }
}

/// The two dressed-propagator poles for a displacement argument.
#[derive(Debug, Clone, Copy)]
pub struct PolePair {
    pub p_plus: C64,
    pub p_minus: C64,
}

impl PolePair {
    /// Both formulas built on the pair are symmetric under `p_+ <-> p_-`, so
    /// the branch of the square root is free; the principal branch is used.
    pub fn new(params: &SystemParams, zeta: C64) -> Self {
        let q = params.q();
        let rad = (q * q + zeta * params.rabi * params.rabi).sqrt();
        PolePair {
            p_plus: (-q + rad) / 2.0,
            p_minus: (-q - rad) / 2.0,
        }
    }

    pub fn is_confluent(&self, params: &SystemParams) -> bool {
        let scale = self.p_plus.norm() + self.p_minus.norm() + params.gamma;
        (self.p_plus - self.p_minus).norm() < CONFLUENT_TOL * scale
    }

    pub fn swapped(&self) -> Self {
        PolePair {
            p_plus: self.p_minus,
            p_minus: self.p_plus,
        }
    }
}

/// Values of the three dressed single-photon propagators at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagators {
    pub d: C64,
    pub d_tilde: C64,
    pub d_tilde2: C64,
}

/// Exponential-sum coefficients of the propagators over `e^{-i p_± x}`.
///
/// `d = b[0] e^{-i p_+ x} + b[1] e^{-i p_- x}` and likewise `t`, `tt` for the
/// single- and double-tilde propagators. Only valid away from confluence.
#[derive(Debug, Clone, Copy)]
pub struct PropCoeffs {
    pub poles: [C64; 2],
    pub b: [C64; 2],
    pub t: [C64; 2],
    pub tt: [C64; 2],
}

impl PropCoeffs {
    pub fn new(params: &SystemParams, zeta: C64) -> Self {
        let pp = PolePair::new(params, zeta);
        let (p1, p2) = (pp.p_plus, pp.p_minus);
        let dp = p1 - p2;
        let sp = p1 + p2;
        PropCoeffs {
            poles: [p1, p2],
            b: [-sp / dp, sp / dp],
            t: [-p2 / dp, p1 / dp],
            tt: [-p2 * p2 / (dp * sp), p1 * p1 / (dp * sp)],
        }
    }

    pub fn coeffs(&self, kind: PropKind) -> &[C64; 2] {
        match kind {
            PropKind::D => &self.b,
            PropKind::DTilde => &self.t,
            PropKind::DTilde2 => &self.tt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropKind {
    D,
    DTilde,
    DTilde2,
}

/// Evaluate the triple `(d_v, d~_v, d~~_v)` at distance `x` for the
/// displacement `v* = zeta * alpha`.
///
/// Near pole confluence the removable singularity is evaluated by its limit
/// rather than by dividing by `p_+ - p_-`.
pub fn propagators(params: &SystemParams, zeta: C64, x: f64) -> Propagators {
    let pair = PolePair::new(params, zeta);
    if pair.is_confluent(params) {
        // l'Hopital limits at p_+ = p_- = p:
        //   d   -> 2 i p x e^{-ipx}
        //   d~  -> (1 + i p x) e^{-ipx}
        //   d~~ -> (1 + i p x / 2) e^{-ipx}
        let p = (pair.p_plus + pair.p_minus) / 2.0;
        let e = (-C64::i() * p * x).exp();
        let ipx = C64::i() * p * x;
        return Propagators {
            d: 2.0 * ipx * e,
            d_tilde: (1.0 + ipx) * e,
            d_tilde2: (1.0 + ipx / 2.0) * e,
        };
    }
    let c = PropCoeffs::new(params, zeta);
    let e = [
        (-C64::i() * c.poles[0] * x).exp(),
        (-C64::i() * c.poles[1] * x).exp(),
    ];
    Propagators {
        d: c.b[0] * e[0] + c.b[1] * e[1],
        d_tilde: c.t[0] * e[0] + c.t[1] * e[1],
        d_tilde2: c.tt[0] * e[0] + c.tt[1] * e[1],
    }
}
