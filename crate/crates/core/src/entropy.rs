//! Reduced density matrix of a counting interval, its spectrum against the
//! Gram metric, and the entanglement entropy with the printed asymptotics.
//!
//! The interval state lives in the four-dimensional span of the
//! non-orthogonal states labelled `(a, b, c, abar)`. Its eigenvalues are
//! those of `rho(T) G(tau)`; numerically they are obtained from the
//! similarity-equivalent Hermitian form `G^{1/2} rho G^{1/2}` built with the
//! positive-semidefinite square root of the Gram matrix, which makes the
//! spectrum real by construction.

use crate::correlators::Correlators;
use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::{WaitingTime, C64};
use nalgebra::{Complex, Matrix4};

type M4 = Matrix4<Complex<f64>>;

/// Eigenvalues below `EIG_TRUNC * max_eig` are treated as zero rank when
/// taking the Gram square root.
const EIG_TRUNC: f64 = 1e-12;

/// Reduced state of a counting interval.
#[derive(Debug, Clone)]
pub struct EntropyResult {
    /// Weight matrix `rho(T)` in basis `(a, b, c, abar)`.
    pub rho: [[C64; 4]; 4],
    /// Gram matrix `G(tau)`.
    pub gram: [[C64; 4]; 4],
    /// Eigenvalues of `rho G`, descending.
    pub eigenvalues: [f64; 4],
    /// Von Neumann entropy, `-sum lambda ln lambda` (0 ln 0 = 0).
    pub entropy: f64,
}

/// Entropy evaluator for one parameter set.
pub struct Entropy {
    pub params: SystemParams,
    pub corr: Correlators,
}

impl Entropy {
    pub fn new(params: &SystemParams) -> Result<Self> {
        Ok(Entropy {
            params: *params,
            corr: Correlators::new(params)?,
        })
    }

    /// The 4x4 weight matrix `rho(T)` in basis `(a, b, c, abar)`.
    pub fn rho_matrix(&self, t: WaitingTime) -> [[C64; 4]; 4] {
        let w = self.corr.derived.w;
        let (rt, ct) = match t {
            WaitingTime::Infinite => {
                let s = C64::new(self.corr.derived.s_inf, 0.0);
                (s, s)
            }
            WaitingTime::Finite(tw) => (self.corr.r(tw), self.corr.c(tw)),
        };
        // coefficient 1 + (1 - w) R(T) - 2 Re C(T) of the (a, b) block
        let a = C64::new(1.0, 0.0) + (1.0 - w) * rt - 2.0 * ct.re;
        let z = C64::new(0.0, 0.0);
        let cr = ct - rt;
        let crs = ct.conj() - rt;
        [
            [a, z, cr, z],
            [z, w * a, z, w * cr],
            [crs, z, rt, z],
            [z, w * crs, z, w * rt],
        ]
    }

    /// Eigenvalues and entropy of the interval `tau` after waiting time `T`.
    pub fn entanglement_entropy(&self, tau: f64, t: WaitingTime) -> Result<EntropyResult> {
        let rho = self.rho_matrix(t);
        let gram = self.corr.gram(tau);
        let g = to_m4(&gram);
        let g = hermitize(&g);
        // PSD square root of the Gram matrix, truncating tiny negatives
        let eig = nalgebra::SymmetricEigen::new(g);
        let max_ev = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b));
        let mut sqrt_diag = M4::zeros();
        for k in 0..4 {
            let ev = eig.eigenvalues[k];
            let clamped = if ev < EIG_TRUNC * max_ev { 0.0 } else { ev };
            sqrt_diag[(k, k)] = Complex::new(clamped.sqrt(), 0.0);
        }
        let u = eig.eigenvectors;
        let g_half = u * sqrt_diag * u.adjoint();
        let b = hermitize(&(g_half * to_m4(&rho) * g_half));
        let lam = nalgebra::SymmetricEigen::new(b).eigenvalues;
        let mut eigenvalues = [0.0f64; 4];
        for k in 0..4 {
            let mut v = lam[k];
            if !(-1e-6..=1.0 + 1e-6).contains(&v) {
                return Err(Error::Inconsistency(format!(
                    "interval-state eigenvalue {v} outside [0, 1]"
                )));
            }
            if v < 0.0 {
                v = 0.0;
            }
            eigenvalues[k] = v;
        }
        eigenvalues.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let entropy = -eigenvalues
            .iter()
            .filter(|&&l| l > 0.0)
            .map(|&l| l * l.ln())
            .sum::<f64>();
        Ok(EntropyResult {
            rho,
            gram,
            eigenvalues,
            entropy,
        })
    }
}

fn to_m4(a: &[[C64; 4]; 4]) -> M4 {
    M4::from_fn(|i, j| Complex::new(a[i][j].re, a[i][j].im))
}

fn hermitize(m: &M4) -> M4 {
    (m + m.adjoint()) * Complex::new(0.5, 0.0)
}

/// Asymptotic regime selector for the printed closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Small interval deep in the pulse: `-c (gamma tau) ln(gamma tau)`
    /// with `c = |lambda|^4/(gamma + |lambda|^2)^2`.
    BulkSmall,
    /// Large interval deep in the pulse: the `sigma` plateau.
    BulkLarge,
    /// Small interval at the pulse front: `-(rabi tau)^2 ln(rabi tau)`.
    BoundarySmall,
    /// Large interval at the pulse front: half the bulk plateau.
    BoundaryLarge,
}

/// `sigma = sqrt(gamma (gamma + 2 |lambda|^2)) / (gamma + |lambda|^2)`.
pub fn sigma(params: &SystemParams) -> f64 {
    let g = params.gamma;
    let l2 = params.derive().lambda_abs2;
    (g * (g + 2.0 * l2)).sqrt() / (g + l2)
}

/// Printed asymptotic entropy for the regime; `tau` is ignored by the
/// plateau regimes.
pub fn asymptotic(params: &SystemParams, regime: Regime, tau: f64) -> f64 {
    let g = params.gamma;
    let l2 = params.derive().lambda_abs2;
    match regime {
        Regime::BulkSmall => {
            let c = (l2 / (g + l2)).powi(2);
            -c * (g * tau) * (g * tau).ln()
        }
        Regime::BoundarySmall => {
            let x = params.rabi * tau;
            -x * x * x.ln()
        }
        Regime::BulkLarge => {
            let s = sigma(params).min(1.0);
            let term = |x: f64| if x > 0.0 { -x * (x / 2.0).ln() } else { 0.0 };
            term(1.0 + s) + term(1.0 - s)
        }
        Regime::BoundaryLarge => asymptotic(params, Regime::BulkLarge, tau) / 2.0,
    }
}
