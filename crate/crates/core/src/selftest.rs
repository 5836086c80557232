//! Built-in invariant suite, exposed to the command line as `selftest`.

use crate::bromwich::inv_laplace_quad;
use crate::correlators::{explicit, Correlators, KernelCtx, KernelKind};
use crate::entropy::Entropy;
use crate::fcs::{Channel, FcsCalc};
use crate::params::{PolePair, SystemParams};
use crate::poly::Poly;
use crate::rational::{inv_laplace, RationalFn};
use crate::spectrum::amplitudes;
use crate::{WaitingTime, C64};

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed,
        detail,
    }
}

/// A small deterministic linear-congruential stream for the sampled checks.
struct Lcg(u64);

impl Lcg {
    fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }

    fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Run the full invariant suite; each entry is fast (whole suite a few
/// seconds).
pub fn run_all() -> Vec<CheckResult> {
    vec![
        vieta_check(),
        kernel_table_check(),
        residue_vs_quadrature(),
        normalization_grid(),
        norm_identities_sampled(),
        gram_psd_sampled(),
        entropy_bound_sampled(),
        amplitude_unitarity(),
        parseval_check(),
    ]
}

fn vieta_check() -> CheckResult {
    let p = SystemParams::new(0.8, 1.0, 3.0, 0.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut rng = Lcg(7);
    for _ in 0..20 {
        let zeta = C64::from_polar(
            rng.in_range(0.0, 1.2),
            rng.in_range(0.0, std::f64::consts::TAU),
        );
        let pair = PolePair::new(&p, zeta);
        worst = worst.max((pair.p_plus + pair.p_minus + p.q()).norm());
        worst = worst.max((pair.p_plus * pair.p_minus + zeta * p.rabi * p.rabi / 4.0).norm());
    }
    check(
        "pole-pair Vieta identities",
        worst < 1e-11,
        format!("worst residual {worst:.2e}"),
    )
}

fn kernel_table_check() -> CheckResult {
    let p = SystemParams::new(0.7, 1.0, 1.7, 0.0).unwrap();
    let pt = C64::new(0.31, 0.72);
    let mut worst: f64 = 0.0;
    for zk in [C64::new(1.0, 0.0), C64::from_polar(1.0, 0.45)] {
        let ctx = KernelCtx::counting(&p, zk);
        for (kind, expl) in [
            (KernelKind::R, explicit::r(&p, pt, zk)),
            (KernelKind::RTilde, explicit::r_tilde(&p, pt, zk)),
            (KernelKind::RTilde2, explicit::r_tilde2(&p, pt, zk)),
            (KernelKind::C, explicit::c(&p, pt, zk)),
            (KernelKind::B, explicit::b(&p, pt, zk)),
        ] {
            worst = worst.max((ctx.kernel(kind, pt) - expl).norm());
        }
    }
    check(
        "kernel closed forms",
        worst < 1e-10,
        format!("worst deviation {worst:.2e}"),
    )
}

fn residue_vs_quadrature() -> CheckResult {
    let mut rng = Lcg(42);
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let n = 2 + (rng.next_f64() * 3.0) as usize;
        let poles: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.in_range(-3.0, 3.0), rng.in_range(-2.5, -0.1)))
            .collect();
        let den = Poly::from_roots(&poles);
        let num = Poly::new(
            (0..n)
                .map(|_| C64::new(rng.in_range(-1.0, 1.0), rng.in_range(-1.0, 1.0)))
                .collect(),
        );
        let f = RationalFn::new(num, den);
        for tau in [0.2, 1.7] {
            let a = inv_laplace(&f, tau, 1.0).unwrap();
            let b = inv_laplace_quad(&f, tau, 1.0).unwrap();
            worst = worst.max((a - b).norm() / (1.0 + a.norm()));
        }
    }
    check(
        "residues vs Bromwich quadrature",
        worst < 1e-7,
        format!("worst deviation {worst:.2e}"),
    )
}

fn normalization_grid() -> CheckResult {
    let mut worst: f64 = 0.0;
    for delta in [0.0, 3f64.sqrt()] {
        for rabi in [2f64.sqrt(), 10.0] {
            let calc = FcsCalc::new(&SystemParams::new(delta, 1.0, rabi, 0.0).unwrap()).unwrap();
            for ch in Channel::ALL {
                for tau in [0.1, 10.0] {
                    for t in [WaitingTime::Finite(1.0), WaitingTime::Infinite] {
                        let f = calc.fcs_generating(ch, 0.0, tau, t).unwrap();
                        worst = worst.max((f - 1.0).norm());
                    }
                }
            }
        }
    }
    check(
        "generating-function normalization",
        worst < 1e-9,
        format!("worst |F(0)-1| = {worst:.2e}"),
    )
}

fn norm_identities_sampled() -> CheckResult {
    let mut rng = Lcg(11);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p =
            SystemParams::new(rng.in_range(0.0, 5.0), 1.0, rng.in_range(0.1, 10.0), 0.0).unwrap();
        let corr = Correlators::new(&p).unwrap();
        let w = corr.derived.w;
        let tau = rng.in_range(0.01, 20.0);
        let g = corr.gram(tau);
        worst = worst.max((g[0][0] + w * g[1][1] - 1.0).norm());
        worst = worst.max((g[2][2] + w * g[3][3] - (1.0 + w)).norm());
        worst = worst.max((g[2][0] + w * g[3][1] - 1.0).norm());
    }
    check(
        "normalization identities",
        worst < 1e-9,
        format!("worst residual {worst:.2e}"),
    )
}

fn gram_psd_sampled() -> CheckResult {
    let mut rng = Lcg(23);
    let mut min_ev = f64::INFINITY;
    for _ in 0..20 {
        let p =
            SystemParams::new(rng.in_range(0.0, 5.0), 1.0, rng.in_range(0.1, 10.0), 0.0).unwrap();
        let corr = Correlators::new(&p).unwrap();
        let g = corr.gram(rng.in_range(0.0, 15.0));
        let m = nalgebra::Matrix4::from_fn(|i, j| nalgebra::Complex::new(g[i][j].re, g[i][j].im));
        let m = (m + m.adjoint()) * nalgebra::Complex::new(0.5, 0.0);
        let ev = nalgebra::SymmetricEigen::new(m).eigenvalues;
        min_ev = min_ev.min(ev.iter().fold(f64::INFINITY, |a, &b| a.min(b)));
    }
    check(
        "Gram positive semidefinite",
        min_ev > -1e-10,
        format!("min eigenvalue {min_ev:.2e}"),
    )
}

fn entropy_bound_sampled() -> CheckResult {
    let mut rng = Lcg(37);
    let mut max_s = f64::NEG_INFINITY;
    for _ in 0..12 {
        let p = SystemParams::new(0.0, 1.0, rng.in_range(0.5, 10.0), 0.0).unwrap();
        let e = Entropy::new(&p).unwrap();
        let t = if rng.next_f64() < 0.4 {
            WaitingTime::Infinite
        } else {
            WaitingTime::Finite(rng.in_range(0.0, 5.0))
        };
        let r = e.entanglement_entropy(rng.in_range(0.0, 30.0), t).unwrap();
        max_s = max_s.max(r.entropy);
    }
    check(
        "entropy below ln 4",
        max_s <= 4f64.ln() + 1e-9,
        format!("max S = {max_s:.6}"),
    )
}

fn amplitude_unitarity() -> CheckResult {
    let a = amplitudes(&SystemParams::new(1.3, 1.0, 0.0, 0.0).unwrap());
    let dev = (a.reflect_power() + a.transmit_power() - 1.0).abs();
    check(
        "weak-drive amplitude unitarity",
        dev < 1e-12,
        format!("deviation {dev:.2e}"),
    )
}

fn parseval_check() -> CheckResult {
    let mu = 5.0;
    let r = crate::charfn::char_to_pmf(
        |chi| Ok((((C64::i() * chi).exp() - 1.0) * mu).exp()),
        40,
        256,
    )
    .unwrap();
    let dev = (r.total_mass - 1.0).abs();
    check(
        "characteristic-function Parseval",
        dev < 1e-8,
        format!("mass deficit {dev:.2e}"),
    )
}
