//! Adaptive quadrature for complex-valued integrands on finite intervals.

use crate::error::{Error, Result};
use crate::C64;

/// Adaptive Simpson rule with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> C64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<C64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    rec(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

fn simpson(a: f64, b: f64, fa: C64, fm: C64, fb: C64) -> C64 {
    (fa + 4.0 * fm + fb) * ((b - a) / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn rec<F: Fn(f64) -> C64>(
    f: &F,
    a: f64,
    b: f64,
    fa: C64,
    fm: C64,
    fb: C64,
    whole: C64,
    tol: f64,
    depth: u32,
) -> Result<C64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.norm() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure(format!(
            "panel [{a}, {b}] did not converge (residual {:.3e})",
            delta.norm()
        )));
    }
    let l = rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?;
    let r = rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?;
    Ok(l + r)
}

/// Iterated 2D integral over the ordered triangle `0 < s1 < s2 < tau`.
pub fn triangle_quad<F: Fn(f64, f64) -> C64>(f: &F, tau: f64, tol: f64) -> Result<C64> {
    let outer = |s2: f64| -> C64 {
        adaptive_simpson(&|s1| f(s1, s2), 0.0, s2, tol / tau.max(1.0), 28)
            .unwrap_or(C64::new(f64::NAN, f64::NAN))
    };
    let v = adaptive_simpson(&outer, 0.0, tau, tol, 28)?;
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::QuadratureFailure("inner panel failed".into()));
    }
    Ok(v)
}
