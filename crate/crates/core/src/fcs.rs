//! Full counting statistics of reflected, chiral, and transmitted photons.
//!
//! The generating function `F_tau(chi)` is assembled from four
//! counting-kernel combinations, each the inverse Laplace transform of a
//! cubic-over-quartic rational built on `R0(p)` and the counting quartic
//! `D(p, z, kappa) = p R0(p) + (z-1) rabi^2 (p + i gamma)(i gamma - kappa (p + i gamma))`.
//!
//! For the reflected and transmitted channels the counting variable is
//! `z0 = e^{i chi0}` and every occurrence of `z - 1` is replaced by
//! `(z0 - 1)/2`; the chiral channel uses `z = e^{i chi}` directly. The
//! replacement is applied once at the channel boundary, so the core never
//! branches on channel parity.

use crate::charfn::{self, PmfResult};
use crate::correlators::{r0_poly, Correlators};
use crate::error::{Error, Result};
use crate::params::{DerivedParams, SystemParams};
use crate::poly::Poly;
use crate::rational::{PoleSum, RationalFn, StabilityPolicy};
use crate::{WaitingTime, C64};

/// Detection channel; `kappa` = 0 (reflected), 1 (chiral), 2 (transmitted).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    Reflected,
    Chiral,
    Transmitted,
}

impl Channel {
    pub fn kappa(&self) -> f64 {
        match self {
            Channel::Reflected => 0.0,
            Channel::Chiral => 1.0,
            Channel::Transmitted => 2.0,
        }
    }

    pub fn from_kappa(k: u8) -> Result<Self> {
        match k {
            0 => Ok(Channel::Reflected),
            1 => Ok(Channel::Chiral),
            2 => Ok(Channel::Transmitted),
            _ => Err(Error::InvalidParameter(format!(
                "kappa must be 0, 1 or 2, got {k}"
            ))),
        }
    }

    pub const ALL: [Channel; 3] = [Channel::Reflected, Channel::Chiral, Channel::Transmitted];
}

impl std::fmt::Display for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Channel::Reflected => "reflected",
            Channel::Chiral => "chiral",
            Channel::Transmitted => "transmitted",
        };
        write!(f, "{s}")
    }
}

/// Which counting-kernel combination of the master formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComboKind {
    /// `Lambda_aa + w Lambda_bb`
    Aa,
    /// `Lambda_cc + w Lambda_abar,abar`
    Cc,
    /// `Lambda_ca + w Lambda_abar,b`
    Ca,
    /// `Lambda_ac + w Lambda_b,abar` (the `Ca` form with `delta -> -delta`)
    Ac,
}

/// Counting statistics calculator for one parameter set.
pub struct FcsCalc {
    pub params: SystemParams,
    pub derived: DerivedParams,
    pub corr: Correlators,
    r0: Poly,
}

/// Photon-number distribution of a counting window, with moments and the
/// long-window asymptotic parameters for comparison.
#[derive(Debug, Clone)]
pub struct FcsResult {
    /// Sampled counting-variable grid (the DFT grid).
    pub chi: Vec<f64>,
    /// Generating-function samples on `chi`.
    pub f_values: Vec<C64>,
    /// `p(0..=n_max)`.
    pub pmf: Vec<f64>,
    /// Mean of the inverted distribution.
    pub mean: f64,
    /// Variance of the inverted distribution.
    pub variance: f64,
    /// Mandel Q of the inverted distribution, `variance/mean - 1`.
    pub q: f64,
    /// Asymptotic mean from the closed form.
    pub mean_asymptotic: f64,
    /// Pole-position correction factor entering the asymptotic form.
    pub z_factor: f64,
    /// Asymptotic Mandel Q from the closed form.
    pub q_asymptotic: f64,
    /// Counting window length.
    pub tau: f64,
    /// Waiting time.
    pub waiting: WaitingTime,
    /// Quality metrics of the inversion.
    pub total_mass: f64,
    pub max_imag: f64,
    pub truncated: bool,
}

impl FcsCalc {
    pub fn new(params: &SystemParams) -> Result<Self> {
        Ok(FcsCalc {
            params: *params,
            derived: params.derive(),
            corr: Correlators::new(params)?,
            r0: r0_poly(params),
        })
    }

    /// Channel counting variable: `z` entering the kernels. For the chiral
    /// channel `z = e^{i chi}`; for reflected/transmitted,
    /// `z = 1 + (e^{i chi} - 1)/2`.
    pub fn z_of_chi(&self, channel: Channel, chi: f64) -> C64 {
        let zm1 = z_minus_one(chi);
        match channel {
            Channel::Chiral => 1.0 + zm1,
            _ => 1.0 + zm1 / 2.0,
        }
    }

    /// The counting quartic `D(p, z, kappa)`.
    pub fn counting_quartic(&self, z: C64, kappa: f64) -> Poly {
        let g = self.params.gamma;
        let o2 = self.params.rabi * self.params.rabi;
        // (p + i g)(i g - kappa (p + i g)) = -kappa p^2 + i g (1 - 2 kappa) p + (kappa - 1) g^2
        let quad = Poly::new(vec![
            C64::new((kappa - 1.0) * g * g, 0.0),
            C64::new(0.0, g * (1.0 - 2.0 * kappa)),
            C64::new(-kappa, 0.0),
        ]);
        let p_r0 = self
            .r0
            .mul(&Poly::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]));
        p_r0.add(&quad.scale((z - 1.0) * o2))
    }

    /// Numerator polynomial of the cleared-quartic residue form of a combo;
    /// the integrand is `i * numerator / D(p, z, kappa)`.
    pub fn combo_numerator(&self, which: ComboKind, z: C64, kappa: f64) -> Poly {
        let g = self.params.gamma;
        let o2 = self.params.rabi * self.params.rabi;
        let aq2 = self.params.q_abs2();
        let w = self.derived.w;
        let zm1 = z - 1.0;
        let p_plus_ig = Poly::new(vec![C64::new(0.0, g), C64::new(1.0, 0.0)]);
        match which {
            ComboKind::Aa => {
                // R0 - kappa (z-1) rabi^2 (p + i g)/2
                self.r0.add(&p_plus_ig.scale(-kappa * zm1 * o2 / 2.0))
            }
            ComboKind::Cc => {
                // (1+w) R0 + i g rabi^2 (z-1)(1-kappa)/2 (1 + (p+2ig)^2/aq2)
                //          - kappa (z-1) rabi^2 (1 + rabi^2(kappa(z-1)+3)/(8 aq2)) (p+ig)
                let p2ig = Poly::new(vec![C64::new(0.0, 2.0 * g), C64::new(1.0, 0.0)]);
                let lorentz = Poly::one().add(&p2ig.mul(&p2ig).scale(C64::new(1.0 / aq2, 0.0)));
                let c1 = C64::i() * g * o2 * zm1 * (1.0 - kappa) / 2.0;
                let c2 = -kappa * zm1 * o2 * (1.0 + o2 * (kappa * zm1 + 3.0) / (8.0 * aq2));
                self.r0
                    .scale(C64::new(1.0 + w, 0.0))
                    .add(&lorentz.scale(c1))
                    .add(&p_plus_ig.scale(c2))
            }
            ComboKind::Ca | ComboKind::Ac => {
                // R0 + i g rabi^2 (z-1)(1-kappa)(p + d' + ig)/(2(d' - ig))
                //    - kappa (z-1) rabi^2 [ (p+ig)/2 + p(p + d' + ig)/(4(d' - ig)) ]
                // with d' = +delta for Ca, -delta for Ac
                let dp = if which == ComboKind::Ca {
                    self.params.delta
                } else {
                    -self.params.delta
                };
                let d_mig = C64::new(dp, -g);
                let p_dp_ig = Poly::new(vec![C64::new(dp, g), C64::new(1.0, 0.0)]);
                let c1 = C64::i() * g * o2 * zm1 * (1.0 - kappa) / (2.0 * d_mig);
                let c2 = -kappa * zm1 * o2;
                let p_poly = Poly::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
                self.r0
                    .add(&p_dp_ig.scale(c1))
                    .add(&p_plus_ig.scale(c2 / 2.0))
                    .add(&p_poly.mul(&p_dp_ig).scale(c2 / (4.0 * d_mig)))
            }
        }
    }

    /// One counting-kernel combination, by residues of the cleared-quartic
    /// form. `z` is the raw counting variable of the call site (already
    /// channel-replaced when appropriate); `|z| <= 1 + 1e-12` is required.
    pub fn lambda_combo(
        &self,
        which: ComboKind,
        tau: f64,
        z: C64,
        channel: Channel,
    ) -> Result<C64> {
        let (m, s) = self.lambda_combo_scaled(which, tau, z, channel.kappa())?;
        Ok(m * s.exp())
    }

    fn lambda_combo_scaled(
        &self,
        which: ComboKind,
        tau: f64,
        z: C64,
        kappa: f64,
    ) -> Result<(C64, f64)> {
        if z.norm() > 1.0 + 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "counting variable off the closed unit disk: |z| = {}",
                z.norm()
            )));
        }
        let num = self.combo_numerator(which, z, kappa).scale(C64::i());
        let den = self.counting_quartic(z, kappa);
        let f = RationalFn::new(num, den);
        // counting kernels may grow: poles above the contour are legitimate
        let ps = PoleSum::from_rational(&f, StabilityPolicy::Lenient, self.params.gamma)?;
        Ok(ps.eval_scaled(tau))
    }

    /// The full generating function `F_tau^{(kappa)}(chi)`, with the coherent
    /// prefactor restored.
    pub fn fcs_generating(
        &self,
        channel: Channel,
        chi: f64,
        tau: f64,
        t: WaitingTime,
    ) -> Result<C64> {
        if tau < 0.0 {
            return Err(Error::InvalidParameter("tau must be >= 0".into()));
        }
        let kappa = channel.kappa();
        let zm1 = match channel {
            Channel::Chiral => z_minus_one(chi),
            _ => z_minus_one(chi) / 2.0,
        };
        let z = 1.0 + zm1;
        // prefactor exponent (z-1) kappa^2 |alpha|^2 tau / L
        let e0 = zm1 * kappa * kappa * self.params.pulse_density * tau;
        let combos: Vec<(C64, ComboKind)> = match t {
            WaitingTime::Infinite => {
                // stationary two-term form, as one combined numerator
                let num = self.w_infinity_numerator(z, kappa).scale(C64::i());
                let den = self.counting_quartic(z, kappa);
                let ps = PoleSum::from_rational(
                    &RationalFn::new(num, den),
                    StabilityPolicy::Lenient,
                    self.params.gamma,
                )?;
                let (m, s) = ps.eval_scaled(tau);
                return Ok((e0 + s).exp() * m);
            }
            WaitingTime::Finite(tw) => {
                if tw < 0.0 {
                    return Err(Error::InvalidParameter("T must be >= 0".into()));
                }
                let rt = self.corr.r(tw);
                let ct = self.corr.c(tw);
                let a = 1.0 + (1.0 - self.derived.w) * rt - 2.0 * ct.re;
                vec![
                    (a, ComboKind::Aa),
                    (rt, ComboKind::Cc),
                    (ct - rt, ComboKind::Ac),
                    (ct.conj() - rt, ComboKind::Ca),
                ]
            }
        };
        // shared scaled evaluation
        let mut parts = Vec::with_capacity(4);
        let mut s_max = f64::NEG_INFINITY;
        for (coef, kind) in &combos {
            let (m, s) = self.lambda_combo_scaled(*kind, tau, z, kappa)?;
            s_max = s_max.max(s);
            parts.push((*coef, m, s));
        }
        let mut acc = C64::new(0.0, 0.0);
        for (coef, m, s) in parts {
            acc += coef * m * (s - s_max).exp();
        }
        Ok((e0 + s_max).exp() * acc)
    }

    /// Numerator of the stationary (`T = infinity`) form.
    fn w_infinity_numerator(&self, z: C64, kappa: f64) -> Poly {
        let g = self.params.gamma;
        let o2 = self.params.rabi * self.params.rabi;
        let aq2 = self.params.q_abs2();
        let l2 = self.derived.lambda_abs2;
        let zm1 = z - 1.0;
        let p_plus_ig = Poly::new(vec![C64::new(0.0, g), C64::new(1.0, 0.0)]);
        let p2ig = Poly::new(vec![C64::new(0.0, 2.0 * g), C64::new(1.0, 0.0)]);
        let lorentz = Poly::one().add(&p2ig.mul(&p2ig).scale(C64::new(1.0 / aq2, 0.0)));
        let fac = g * o2 * zm1 / (l2 + g);
        let t1 = lorentz.scale(fac * C64::i() * g * (1.0 - kappa) / 2.0);
        let t2 = p_plus_ig.scale(-fac * kappa * (1.0 + o2 * (kappa * zm1 + 4.0) / (8.0 * aq2)));
        self.r0.add(&t1).add(&t2)
    }

    /// Long-window mean photon number (closed form).
    pub fn mean_counts(&self, channel: Channel, tau: f64) -> f64 {
        let p = &self.params;
        let o2 = p.rabi * p.rabi;
        let half_o2 = o2 / 2.0;
        let d2 = p.delta * p.delta;
        let g2 = p.gamma * p.gamma;
        // incident-beam density |alpha_0|^2/L = rabi^2/(4 gamma)
        let dens0 = o2 / (4.0 * p.gamma);
        match channel {
            Channel::Chiral => tau * p.pulse_density,
            Channel::Reflected => tau * dens0 * g2 / (half_o2 + d2 + g2),
            Channel::Transmitted => tau * dens0 * (half_o2 + d2) / (half_o2 + d2 + g2),
        }
    }

    /// Pole-position correction factor `Z` for the channel.
    pub fn z_factor(&self, channel: Channel) -> f64 {
        let p = &self.params;
        let kappa = channel.kappa();
        let o2 = p.rabi * p.rabi;
        let d2 = p.delta * p.delta;
        let g2 = p.gamma * p.gamma;
        let den = o2 + 2.0 * d2 + 2.0 * g2;
        o2 * (kappa * (o2 + 3.0 * d2 - g2) + 3.0 * g2 - d2) / (den * den)
    }

    /// Long-window Mandel Q factor (closed form). Zero in the chiral channel.
    pub fn mandel_q(&self, channel: Channel) -> f64 {
        let p = &self.params;
        if p.rabi == 0.0 {
            return 0.0;
        }
        let o2 = p.rabi * p.rabi;
        let d2 = p.delta * p.delta;
        let g2 = p.gamma * p.gamma;
        let den = o2 + 2.0 * d2 + 2.0 * g2;
        match channel {
            Channel::Chiral => 0.0,
            Channel::Reflected => -o2 * (3.0 * g2 - d2) / (den * den),
            Channel::Transmitted => {
                o2 * g2 / (o2 / 2.0 + d2) * (2.0 * o2 + 5.0 * d2 + g2) / (den * den)
            }
        }
    }

    /// Numeric mean and variance from the generating function: central
    /// differences of `log F` at `chi = 0` with one Richardson level.
    pub fn mean_var_numeric(
        &self,
        channel: Channel,
        tau: f64,
        t: WaitingTime,
    ) -> Result<(f64, f64)> {
        let h = 1e-4;
        let lf = |chi: f64| -> Result<C64> {
            let f = self.fcs_generating(channel, chi, tau, t)?;
            Ok(f.ln())
        };
        let (k1, km1, k2, km2) = (lf(h)?, lf(-h)?, lf(h / 2.0)?, lf(-h / 2.0)?);
        let mean_h = (k1 - km1).im / (2.0 * h);
        let mean_h2 = (k2 - km2).im / h;
        let var_h = -(k1 + km1).re / (h * h);
        let var_h2 = -(k2 + km2).re / (h * h / 4.0);
        Ok(((4.0 * mean_h2 - mean_h) / 3.0, (4.0 * var_h2 - var_h) / 3.0))
    }

    /// Numeric Mandel Q, `variance/mean - 1`.
    pub fn q_numeric(&self, channel: Channel, tau: f64, t: WaitingTime) -> Result<f64> {
        let (mean, var) = self.mean_var_numeric(channel, tau, t)?;
        Ok(var / mean - 1.0)
    }

    /// Photon-number distribution from the exact generating function.
    pub fn pmf(
        &self,
        channel: Channel,
        tau: f64,
        t: WaitingTime,
        n_max: Option<usize>,
    ) -> Result<FcsResult> {
        // size the grid from the numeric moments (cheap: a few F calls)
        let (mean_est, var_est) = if tau > 0.0 {
            self.mean_var_numeric(channel, tau, t)?
        } else {
            (0.0, 0.0)
        };
        let q_est = if mean_est > 1e-9 {
            var_est / mean_est - 1.0
        } else {
            0.0
        };
        let (auto_n_max, auto_samples) = charfn::suggested_samples(mean_est.max(0.0), q_est);
        let n_max = n_max.unwrap_or(auto_n_max);
        let n_samples = auto_samples.max(4 * (n_max + 1)).next_power_of_two();
        let mut chi_grid = Vec::with_capacity(n_samples);
        let mut f_values = Vec::with_capacity(n_samples);
        let inv: PmfResult = charfn::char_to_pmf(
            |chi| {
                let f = self.fcs_generating(channel, chi, tau, t)?;
                chi_grid.push(chi);
                f_values.push(f);
                Ok(f)
            },
            n_max,
            n_samples,
        )?;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for (n, &p) in inv.pmf.iter().enumerate() {
            mean += n as f64 * p;
            m2 += (n * n) as f64 * p;
        }
        let variance = m2 - mean * mean;
        Ok(FcsResult {
            chi: chi_grid,
            f_values,
            pmf: inv.pmf,
            mean,
            variance,
            q: if mean > 0.0 {
                variance / mean - 1.0
            } else {
                0.0
            },
            mean_asymptotic: self.mean_counts(channel, tau),
            z_factor: self.z_factor(channel),
            q_asymptotic: self.mandel_q(channel),
            tau,
            waiting: t,
            total_mass: inv.total_mass,
            max_imag: inv.max_imag,
            truncated: inv.truncated,
        })
    }
}

/// `e^{i chi} - 1`, evaluated without cancellation at small `chi`.
pub fn z_minus_one(chi: f64) -> C64 {
    let s = (chi / 2.0).sin();
    C64::new(-2.0 * s * s, chi.sin())
}
