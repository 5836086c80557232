//! Two-point kernels of the scattered pulse, their Laplace-space table, the
//! time-domain correlation functions `R, C, M, N`, and the 4x4 Gram matrix
//! of the interval states.
//!
//! The scalar kernels are half-line integrals of products of dressed
//! propagators,
//!
//! ```text
//! r(p; u, v*)  = int_0^inf dx  d_u*(x) d_v(x) e^{ipx},     ...
//! ```
//!
//! evaluated in closed form from the exponential representation of the
//! propagators. Displacements are dimensionless: `u* = zeta_u alpha`,
//! `v* = zeta_v alpha` with `alpha` real non-negative, so for the counting
//! kernels `zeta_u = conj(z_kappa)` and `zeta_v = z_kappa`.

use crate::error::{Error, Result};
use crate::ode;
use crate::params::{DerivedParams, PolePair, SystemParams};
use crate::poly::Poly;
use crate::rational::{PoleSum, RationalFn, StabilityPolicy, CLUSTER_TOL};
use crate::C64;

/// The four block labels of the scattering-operator algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockLabel {
    A,
    B,
    C,
    ABar,
}

impl BlockLabel {
    /// Leftmost-block map under photon annihilation.
    pub fn sigma(self) -> Self {
        match self {
            BlockLabel::A | BlockLabel::B => BlockLabel::B,
            BlockLabel::C | BlockLabel::ABar => BlockLabel::ABar,
        }
    }

    /// Rightmost-block map under photon annihilation.
    pub fn mu(self) -> Self {
        match self {
            BlockLabel::A | BlockLabel::C => BlockLabel::A,
            BlockLabel::B | BlockLabel::ABar => BlockLabel::B,
        }
    }

    pub const ALL: [BlockLabel; 4] = [
        BlockLabel::A,
        BlockLabel::B,
        BlockLabel::C,
        BlockLabel::ABar,
    ];
}

/// Scalar kernel selectors; `RTilde` is `r~`, `RTilde2` is `r~~`, `CBar` the
/// conjugate-ordered `c`, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    R,
    RTilde,
    RTilde2,
    C,
    CBar,
    B,
    BBar,
    F,
    FBar,
}

impl KernelKind {
    /// (conjugated side, direct side) propagator selections.
    fn sides(self) -> (PropSel, PropSel) {
        use KernelKind::*;
        use PropSel::*;
        match self {
            R => (D, D),
            RTilde => (T, T),
            RTilde2 => (TT, TT),
            C => (T, D),
            CBar => (D, T),
            B => (TT, T),
            BBar => (T, TT),
            F => (TT, D),
            FBar => (D, TT),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PropSel {
    D,
    T,
    TT,
}

/// One side of a kernel: exponential terms `poly(x) e^{-i pole x}` for each
/// of the three propagators. The polynomial degree exceeds zero only at pole
/// confluence.
#[derive(Debug, Clone)]
struct SideRep {
    d: Vec<(C64, Vec<C64>)>,
    t: Vec<(C64, Vec<C64>)>,
    tt: Vec<(C64, Vec<C64>)>,
}

impl SideRep {
    fn new(params: &SystemParams, zeta: C64) -> Self {
        let pair = PolePair::new(params, zeta);
        if pair.is_confluent(params) {
            let p = (pair.p_plus + pair.p_minus) / 2.0;
            let ip = C64::i() * p;
            SideRep {
                d: vec![(p, vec![C64::new(0.0, 0.0), 2.0 * ip])],
                t: vec![(p, vec![C64::new(1.0, 0.0), ip])],
                tt: vec![(p, vec![C64::new(1.0, 0.0), ip / 2.0])],
            }
        } else {
            let (p1, p2) = (pair.p_plus, pair.p_minus);
            let dp = p1 - p2;
            let sp = p1 + p2;
            let one = |c: C64| vec![c];
            SideRep {
                d: vec![(p1, one(-sp / dp)), (p2, one(sp / dp))],
                t: vec![(p1, one(-p2 / dp)), (p2, one(p1 / dp))],
                tt: vec![
                    (p1, one(-p2 * p2 / (dp * sp))),
                    (p2, one(p1 * p1 / (dp * sp))),
                ],
            }
        }
    }

    fn get(&self, sel: PropSel) -> &Vec<(C64, Vec<C64>)> {
        match sel {
            PropSel::D => &self.d,
            PropSel::T => &self.t,
            PropSel::TT => &self.tt,
        }
    }
}

/// Kernel evaluation context for one `(u, v)` displacement pair.
pub struct KernelCtx {
    lambda_abs2: f64,
    u_side: SideRep,
    v_side: SideRep,
}

impl KernelCtx {
    pub fn new(params: &SystemParams, zeta_u: C64, zeta_v: C64) -> Self {
        KernelCtx {
            lambda_abs2: params.derive().lambda_abs2,
            u_side: SideRep::new(params, zeta_u),
            v_side: SideRep::new(params, zeta_v),
        }
    }

    /// Counting context: `u = z_kappa alpha`, `v* = z_kappa alpha*`.
    pub fn counting(params: &SystemParams, z_kappa: C64) -> Self {
        KernelCtx::new(params, z_kappa.conj(), z_kappa)
    }

    /// Pointwise kernel value: a sum over pole combinations of
    /// `m! w / (-i (p + conj(p_u) - p_v))^{m+1}` terms.
    pub fn kernel(&self, kind: KernelKind, p: C64) -> C64 {
        let (gu, hv) = kind.sides();
        let mut acc = C64::new(0.0, 0.0);
        for (pu, cu) in self.u_side.get(gu) {
            for (pv, cv) in self.v_side.get(hv) {
                let q = p + pu.conj() - pv;
                for (mu, au) in cu.iter().enumerate() {
                    for (mv, av) in cv.iter().enumerate() {
                        let m = mu + mv;
                        let mut term = au.conj() * av;
                        let base = -C64::i() * q;
                        let mut fact = 1.0;
                        for k in 1..=m {
                            fact *= k as f64;
                        }
                        term *= fact;
                        term /= base.powu(m as u32 + 1);
                        acc += term;
                    }
                }
            }
        }
        acc
    }

    /// The kernel as a rational function of `p` (partial fractions over the
    /// exponent combinations, merged when degenerate).
    pub fn kernel_rational(&self, kind: KernelKind) -> RationalFn {
        let (nums, den) = self.shared_kernel_nums(&[kind]);
        RationalFn::new(nums.into_iter().next().unwrap(), den)
    }

    /// Laplace-transform table entry `G_{beta' beta}(p)`, assembled from the
    /// kernels with the geometric-series denominator `1 - |lambda|^2 r(p)`.
    pub fn laplace_g(&self, beta_p: BlockLabel, beta: BlockLabel, p: C64) -> Result<C64> {
        use BlockLabel::*;
        let k = |kind: KernelKind| self.kernel(kind, p);
        let l2 = self.lambda_abs2;
        let den = 1.0 - l2 * k(KernelKind::R);
        if den.norm() < 1e-13 {
            return Err(Error::OnPole(p));
        }
        let v = match (beta_p, beta) {
            (A, A) | (ABar, ABar) => k(KernelKind::RTilde) / den,
            (B, B) => k(KernelKind::R) / den,
            (C, C) => {
                let rt = k(KernelKind::RTilde);
                k(KernelKind::RTilde2) + l2 * rt * rt / den
            }
            (A, B) | (ABar, B) => k(KernelKind::C) / den,
            (B, A) | (B, ABar) => k(KernelKind::CBar) / den,
            (C, A) | (C, ABar) => {
                k(KernelKind::B) + l2 * k(KernelKind::C) * k(KernelKind::RTilde) / den
            }
            (A, C) | (ABar, C) => {
                k(KernelKind::BBar) + l2 * k(KernelKind::CBar) * k(KernelKind::RTilde) / den
            }
            (A, ABar) => k(KernelKind::RTilde) + l2 * k(KernelKind::C) * k(KernelKind::CBar) / den,
            (ABar, A) => {
                // transpose partner of (A, ABar); the table lists only the
                // latter, Hermiticity of the equal-displacement Gram fixes
                // this one
                k(KernelKind::RTilde) + l2 * k(KernelKind::CBar) * k(KernelKind::C) / den
            }
            (C, B) => {
                let c = k(KernelKind::C);
                k(KernelKind::F) + l2 * c * c / den
            }
            (B, C) => {
                let cb = k(KernelKind::CBar);
                k(KernelKind::FBar) + l2 * cb * cb / den
            }
        };
        Ok(v)
    }

    /// Numerators of several kernels over one shared exponent denominator.
    ///
    /// All kernels of a context have poles on the same exponent combinations,
    /// so their rational forms can share a denominator exactly.
    pub fn shared_kernel_nums(&self, kinds: &[KernelKind]) -> (Vec<Poly>, Poly) {
        let fraction_lists: Vec<Vec<(C64, usize, C64)>> =
            kinds.iter().map(|&k| self.fractions(k)).collect();
        // union of (pole, max order)
        let mut poles: Vec<(C64, usize)> = Vec::new();
        for list in &fraction_lists {
            'frac: for &(pole, ord, _) in list {
                for e in poles.iter_mut() {
                    if (e.0 - pole).norm() <= CLUSTER_TOL * (1.0 + pole.norm()) {
                        e.1 = e.1.max(ord);
                        continue 'frac;
                    }
                }
                poles.push((pole, ord));
            }
        }
        let mut den = Poly::one();
        for &(pole, ord) in &poles {
            for _ in 0..ord {
                den = den.mul_linear(pole);
            }
        }
        let nums = fraction_lists
            .iter()
            .map(|list| {
                let mut num = Poly::zero();
                for &(pole, ord, w) in list {
                    // den / (p - pole)^ord, built exactly from the factor list
                    let mut cof = Poly::one();
                    for &(p2, o2) in &poles {
                        let skip = if (p2 - pole).norm() <= CLUSTER_TOL * (1.0 + pole.norm()) {
                            ord
                        } else {
                            0
                        };
                        for _ in 0..o2.saturating_sub(skip) {
                            cof = cof.mul_linear(p2);
                        }
                    }
                    num = num.add(&cof.scale(w));
                }
                num
            })
            .collect();
        (nums, den)
    }

    fn fractions(&self, kind: KernelKind) -> Vec<(C64, usize, C64)> {
        let (gu, hv) = kind.sides();
        let mut fractions: Vec<(C64, usize, C64)> = Vec::new();
        for (pu, cu) in self.u_side.get(gu) {
            for (pv, cv) in self.v_side.get(hv) {
                let pole = pv - pu.conj();
                for (mu, au) in cu.iter().enumerate() {
                    for (mv, av) in cv.iter().enumerate() {
                        let m = mu + mv;
                        let mut fact = 1.0;
                        for k in 1..=m {
                            fact *= k as f64;
                        }
                        let w = au.conj() * av * fact * C64::i().powu(m as u32 + 1);
                        fractions.push((pole, m + 1, w));
                    }
                }
            }
        }
        // merge identical (pole, order) pairs
        let mut merged: Vec<(C64, usize, C64)> = Vec::new();
        'outer: for (pole, ord, w) in fractions {
            for m in merged.iter_mut() {
                if m.1 == ord && (m.0 - pole).norm() <= CLUSTER_TOL * (1.0 + pole.norm()) {
                    m.2 += w;
                    continue 'outer;
                }
            }
            merged.push((pole, ord, w));
        }
        merged
    }

    /// `G_cb(p)` as a rational function; its residues give `N(tau)`.
    ///
    /// With the shared exponent denominator `E`:
    /// `G_cb = [n_f (E - l2 n_r) + l2 n_c^2] / (E (E - l2 n_r))`.
    pub fn g_cb_rational(&self) -> RationalFn {
        let l2 = C64::new(self.lambda_abs2, 0.0);
        let (nums, e) = self.shared_kernel_nums(&[KernelKind::F, KernelKind::C, KernelKind::R]);
        let (n_f, n_c, n_r) = (&nums[0], &nums[1], &nums[2]);
        let geom = e.sub(&n_r.scale(l2));
        let num = n_f.mul(&geom).add(&n_c.mul(n_c).scale(l2));
        RationalFn::new(num, e.mul(&geom))
    }
}

/// Add two rational functions over the product denominator.
pub fn rational_add(a: &RationalFn, b: &RationalFn) -> RationalFn {
    RationalFn::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den))
}

/// Cancel numerator/denominator root pairs that coincide numerically.
pub fn rational_simplify(f: &RationalFn) -> RationalFn {
    let mut num = f.num.clone();
    let mut den = f.den.clone();
    if num.is_zero() || den.degree() == 0 {
        return RationalFn::new(num, den);
    }
    if let Ok(droots) = den.roots() {
        for r in droots {
            if num.degree() == 0 {
                break;
            }
            let scale = num.coeff_scale() * r.norm().max(1.0).powi(num.degree() as i32);
            if num.eval(r).norm() <= 1e-9 * scale {
                num = num.deflate(r);
                den = den.deflate(r);
            }
        }
    }
    RationalFn::new(num, den)
}

/// `R0(p)`, the cubic whose roots set every relaxation rate and the Mollow
/// peak positions and widths.
pub fn r0_poly(params: &SystemParams) -> Poly {
    let g = params.gamma;
    let o2 = params.rabi * params.rabi;
    let d2 = params.delta * params.delta;
    Poly::new(vec![
        C64::new(0.0, -g * (o2 + 2.0 * d2 + 2.0 * g * g)),
        C64::new(-(o2 + d2 + 5.0 * g * g), 0.0),
        C64::new(0.0, 4.0 * g),
        C64::new(1.0, 0.0),
    ])
}

/// `Q0(p, z_kappa)`, the quartic denominator of the equal-displacement
/// kernels.
pub fn q0_poly(params: &SystemParams, z_kappa: C64) -> Poly {
    let g = params.gamma;
    let o2 = params.rabi * params.rabi;
    let p_plus_ig = Poly::new(vec![C64::new(0.0, g), C64::new(1.0, 0.0)]);
    let p_r0 = r0_poly(params).mul(&Poly::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]));
    let lin = p_plus_ig.scale(C64::new(0.0, -g * o2));
    let quad = p_plus_ig.mul(&p_plus_ig).scale(-(z_kappa - 1.0) * o2);
    p_r0.add(&lin).add(&quad)
}

/// `M0(p) = (p + 2i gamma)^2 - rabi^2/2`.
pub fn m0_poly(params: &SystemParams) -> Poly {
    let g = params.gamma;
    Poly::new(vec![
        C64::new(-params.rabi * params.rabi / 2.0 - 4.0 * g * g, 0.0),
        C64::new(0.0, 4.0 * g),
        C64::new(1.0, 0.0),
    ])
}

/// `C0(p) = M0(p) - (gamma + |lambda|^2)/gamma (delta + i gamma)(p + 2i gamma)`.
pub fn c0_poly(params: &SystemParams, derived: &DerivedParams) -> Poly {
    let g = params.gamma;
    let fac = (g + derived.lambda_abs2) / g * params.q();
    let lin = Poly::new(vec![C64::new(0.0, 2.0 * g), C64::new(1.0, 0.0)]).scale(-fac);
    m0_poly(params).add(&lin)
}

/// Closed forms of the equal-displacement kernels (the `z_kappa` table).
pub mod explicit {
    use super::*;

    pub fn r(params: &SystemParams, p: C64, zk: C64) -> C64 {
        let q0 = q0_poly(params, zk).eval(p);
        -2.0 * C64::i() * params.q_abs2() * (p + C64::i() * params.gamma) / q0
    }

    pub fn r_tilde(params: &SystemParams, p: C64, zk: C64) -> C64 {
        let q0 = q0_poly(params, zk).eval(p);
        let r0 = r0_poly(params).eval(p);
        let o2 = params.rabi * params.rabi;
        C64::i() * (r0 - o2 / 2.0 * (zk - 2.0) * (p + C64::i() * params.gamma)) / q0
    }

    pub fn r_tilde2(params: &SystemParams, p: C64, zk: C64) -> C64 {
        let g = params.gamma;
        let q0 = q0_poly(params, zk).eval(p);
        let r0 = r0_poly(params).eval(p);
        let o2 = params.rabi * params.rabi;
        let aq2 = params.q_abs2();
        let d2g2 = params.delta * params.delta - g * g;
        C64::i()
            * (r0 - C64::i() * zk * g * o2 * (p * p + aq2) / (2.0 * aq2)
                + o2 * (p + C64::i() * g) * (1.0 - zk * d2g2 / aq2 - zk * zk * o2 / (8.0 * aq2)))
            / q0
    }

    pub fn c(params: &SystemParams, p: C64, zk: C64) -> C64 {
        let g = params.gamma;
        let q0 = q0_poly(params, zk).eval(p);
        C64::i() * params.q() * (p + 2.0 * C64::i() * g) * (p - params.delta + C64::i() * g) / q0
    }

    pub fn b(params: &SystemParams, p: C64, zk: C64) -> C64 {
        let g = params.gamma;
        let q0 = q0_poly(params, zk).eval(p);
        let o2 = params.rabi * params.rabi;
        r_tilde(params, p, zk)
            - C64::i() * o2 * zk * (p + 2.0 * C64::i() * g) * (p + params.delta + C64::i() * g)
                / (4.0 * (params.delta - C64::i() * g) * q0)
    }
}

/// The four time-domain correlation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrKind {
    R,
    C,
    M,
    N,
}

impl CorrKind {
    pub const ALL: [CorrKind; 4] = [CorrKind::R, CorrKind::C, CorrKind::M, CorrKind::N];
}

/// Correlation functions `R, C, M, N` of the scattered pulse, with their
/// Laplace transforms, pole sums, ODE system, and resonant closed forms.
pub struct Correlators {
    pub params: SystemParams,
    pub derived: DerivedParams,
    r_ps: PoleSum,
    c_ps: PoleSum,
    m_ps: PoleSum,
    n_ps: PoleSum,
}

impl Correlators {
    pub fn new(params: &SystemParams) -> Result<Self> {
        let derived = params.derive();
        let g = params.gamma;
        let r_ps = PoleSum::from_rational(&r_laplace(params), StabilityPolicy::Strict, g)?;
        let c_ps = PoleSum::from_rational(&c_laplace(params), StabilityPolicy::Strict, g)?;
        let m_ps =
            PoleSum::from_rational(&m_laplace(params, &derived), StabilityPolicy::Strict, g)?;
        let gcb = KernelCtx::counting(params, C64::new(1.0, 0.0)).g_cb_rational();
        let n_ps = PoleSum::from_rational(&gcb, StabilityPolicy::Strict, g)?;
        Ok(Correlators {
            params: *params,
            derived,
            r_ps,
            c_ps,
            m_ps,
            n_ps,
        })
    }

    /// Residue-route evaluation.
    pub fn eval(&self, kind: CorrKind, tau: f64) -> C64 {
        match kind {
            CorrKind::R => self.r_ps.eval(tau),
            CorrKind::C => self.c_ps.eval(tau),
            CorrKind::M => self.m_ps.eval(tau),
            CorrKind::N => self.n_ps.eval(tau),
        }
    }

    pub fn r(&self, tau: f64) -> C64 {
        self.eval(CorrKind::R, tau)
    }

    pub fn c(&self, tau: f64) -> C64 {
        self.eval(CorrKind::C, tau)
    }

    pub fn m(&self, tau: f64) -> C64 {
        self.eval(CorrKind::M, tau)
    }

    pub fn n(&self, tau: f64) -> C64 {
        self.eval(CorrKind::N, tau)
    }

    /// Common stationary value `gamma/(gamma + |lambda|^2)`.
    pub fn stationary(&self) -> f64 {
        self.derived.s_inf
    }

    /// ODE-route values of `[R, C, M, N]` on an ascending grid; the oracle
    /// for the residue route.
    pub fn ode_grid(&self, taus: &[f64], tol: f64) -> Result<Vec<[C64; 4]>> {
        let p = &self.params;
        let g = p.gamma;
        let o2 = p.rabi * p.rabi;
        let d2 = p.delta * p.delta;
        let q = p.q();
        let aq2 = p.q_abs2();
        let zero = C64::new(0.0, 0.0);
        // y = [R, R', R'', C, M, M', M'', N]
        let rhs = move |_t: f64, y: &[C64]| -> Vec<C64> {
            let r3 = C64::new(2.0 * g * aq2, 0.0)
                - 4.0 * g * y[2]
                - (o2 + d2 + 5.0 * g * g) * y[1]
                - g * (o2 + 2.0 * d2 + 2.0 * g * g) * y[0];
            let c1 = C64::i() * q * y[3] - C64::i() * q * (1.0 - o2 / (2.0 * aq2) * y[0]);
            let m3 = C64::new(2.0 * g * aq2, 0.0)
                - 4.0 * g * y[6]
                - (o2 + d2 + 5.0 * g * g) * y[5]
                - g * (o2 + 2.0 * d2 + 2.0 * g * g) * y[4];
            let n1 = C64::i() * q * y[7] - q / q.conj() * (y[5] + C64::i() * q.conj() * y[4]);
            vec![y[1], y[2], r3, c1, y[5], y[6], m3, n1]
        };
        let y0 = [
            zero,
            zero,
            C64::new(2.0 * aq2, 0.0),
            zero,
            C64::new(1.0, 0.0),
            zero,
            C64::new(-o2 / 2.0, 0.0),
            zero,
        ];
        let sol = ode::integrate(rhs, 0.0, &y0, taus, tol, tol * 1e-2)?;
        Ok(sol.iter().map(|y| [y[0], y[3], y[4], y[7]]).collect())
    }

    /// Resonant (`delta = 0`) analytic solutions; `None` off resonance.
    pub fn resonant_analytic(&self, kind: CorrKind, tau: f64) -> Option<C64> {
        if self.params.delta != 0.0 {
            return None;
        }
        let g = self.params.gamma;
        let o2 = self.params.rabi * self.params.rabi;
        let obar = (C64::new(o2 - g * g / 4.0, 0.0)).sqrt();
        let x = obar * tau;
        let cos = x.cos();
        // sin(x)/x stays finite through obar -> 0
        let sinc = if x.norm() < 1e-4 {
            let x2 = x * x;
            1.0 - x2 / 6.0 + x2 * x2 / 120.0
        } else {
            x.sin() / x
        };
        let sin_over_obar = sinc * tau;
        let e32 = (-1.5 * g * tau).exp();
        let eg = (-g * tau).exp();
        let den = o2 + 2.0 * g * g;
        let base = 2.0 * g * g / den;
        let v = match kind {
            CorrKind::R => base - (2.0 * g * g / den) * e32 * (cos + 1.5 * g * sin_over_obar),
            CorrKind::C => base + g * e32 * ((o2 - g * g) * sin_over_obar - 2.0 * g * cos) / den,
            CorrKind::M => {
                base + 0.5 * eg
                    + (o2 - 2.0 * g * g) / (2.0 * den) * e32 * cos
                    + g / 4.0 * (5.0 * o2 - 2.0 * g * g) / den * e32 * sin_over_obar
            }
            CorrKind::N => {
                return self.resonant_analytic(CorrKind::M, tau).map(|m| m - eg);
            }
        };
        Some(v)
    }

    /// Gram matrix of the four interval states in basis order
    /// `(a, b, c, abar)`; Hermitian and positive semidefinite.
    pub fn gram(&self, tau: f64) -> [[C64; 4]; 4] {
        let w = self.derived.w;
        let r = self.r(tau);
        let c = self.c(tau);
        let m = self.m(tau);
        let n = self.n(tau);
        let (cb, mb, nb) = (c.conj(), m.conj(), n.conj());
        let one = C64::new(1.0, 0.0);
        [
            [one - w * r, c, one - w * cb, m],
            [cb, r, nb, cb],
            [one - w * c, n, one + w * w * r, one - w * c],
            [mb, c, one - w * cb, one - w * r],
        ]
    }
}

/// Laplace transform of `R`: `-2i (delta^2+gamma^2)(p + i gamma)/(p R0(p))`.
pub fn r_laplace(params: &SystemParams) -> RationalFn {
    let g = params.gamma;
    let num = Poly::new(vec![C64::new(0.0, g), C64::new(1.0, 0.0)])
        .scale(C64::new(0.0, -2.0 * params.q_abs2()));
    RationalFn::new(num, p_r0(params))
}

/// Laplace transform of `C`: `i q (p + 2i gamma)(p - delta + i gamma)/(p R0(p))`.
pub fn c_laplace(params: &SystemParams) -> RationalFn {
    let g = params.gamma;
    let num = Poly::new(vec![C64::new(0.0, 2.0 * g), C64::new(1.0, 0.0)])
        .mul(&Poly::new(vec![
            C64::new(-params.delta, g),
            C64::new(1.0, 0.0),
        ]))
        .scale(C64::i() * params.q());
    RationalFn::new(num, p_r0(params))
}

/// Laplace transform of `M`:
/// `i s_inf [R0(p) + (|lambda|^2/gamma) p M0(p)] / (p R0(p))`.
pub fn m_laplace(params: &SystemParams, derived: &DerivedParams) -> RationalFn {
    let p_m0 = m0_poly(params).mul(&Poly::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]));
    let num = r0_poly(params)
        .add(&p_m0.scale(C64::new(derived.lambda_abs2 / params.gamma, 0.0)))
        .scale(C64::i() * derived.s_inf);
    RationalFn::new(num, p_r0(params))
}

fn p_r0(params: &SystemParams) -> Poly {
    r0_poly(params).mul(&Poly::new(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)]))
}
