//! Adaptive Dormand-Prince 5(4) integration for complex state vectors.

use crate::error::{Error, Result};
use crate::C64;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrate `y' = f(t, y)` from `t0`, reporting the state at each point of
/// the ascending `t_out` grid (first entry may equal `t0`).
pub fn integrate<F>(
    f: F,
    t0: f64,
    y0: &[C64],
    t_out: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<Vec<C64>>>
where
    F: Fn(f64, &[C64]) -> Vec<C64>,
{
    let n = y0.len();
    let mut out = Vec::with_capacity(t_out.len());
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = f(t, &y);
    let mut h: f64 = 1e-4;
    let axpy = |y: &[C64], h: f64, cs: &[(f64, &Vec<C64>)]| -> Vec<C64> {
        (0..n)
            .map(|i| {
                let mut acc = y[i];
                for (c, k) in cs {
                    acc += *c * h * k[i];
                }
                acc
            })
            .collect()
    };
    for &target in t_out {
        if target < t - 1e-12 {
            return Err(Error::InvalidParameter("t_out must be ascending".into()));
        }
        while t < target {
            let mut step = h.min(target - t);
            loop {
                if step < 1e-14 * (1.0 + t.abs()) {
                    return Err(Error::StepUnderflow(t));
                }
                let y2 = axpy(&y, step, &[(A21, &k1)]);
                let k2 = f(t + 0.2 * step, &y2);
                let y3 = axpy(&y, step, &[(A31, &k1), (A32, &k2)]);
                let k3 = f(t + 0.3 * step, &y3);
                let y4 = axpy(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
                let k4 = f(t + 0.8 * step, &y4);
                let y5 = axpy(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
                let k5 = f(t + 8.0 / 9.0 * step, &y5);
                let y6 = axpy(
                    &y,
                    step,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                );
                let k6 = f(t + step, &y6);
                let ynew = axpy(
                    &y,
                    step,
                    &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
                );
                let k7 = f(t + step, &ynew);
                // embedded error estimate
                let mut err: f64 = 0.0;
                for i in 0..n {
                    let e = step
                        * (E1 * k1[i]
                            + E3 * k3[i]
                            + E4 * k4[i]
                            + E5 * k5[i]
                            + E6 * k6[i]
                            + E7 * k7[i]);
                    let sc = atol + rtol * y[i].norm().max(ynew[i].norm());
                    err += (e.norm() / sc).powi(2);
                }
                err = (err / n as f64).sqrt();
                if err <= 1.0 {
                    t += step;
                    y = ynew;
                    k1 = k7; // FSAL
                    let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 5.0);
                    h = step * fac;
                    break;
                }
                step *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
