//! Classic fourth-order Runge-Kutta.

use crate::error::Result;

pub fn rk4_step<const N: usize, F>(f: &F, t: f64, y: [f64; N], h: f64) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]> + ?Sized,
{
    let axpy = |y: &[f64; N], k: &[f64; N], s: f64| -> [f64; N] {
        let mut out = *y;
        for i in 0..N {
            out[i] += s * k[i];
        }
        out
    };
    let k1 = f(t, &y)?;
    let k2 = f(t + 0.5 * h, &axpy(&y, &k1, 0.5 * h))?;
    let k3 = f(t + 0.5 * h, &axpy(&y, &k2, 0.5 * h))?;
    let k4 = f(t + h, &axpy(&y, &k3, h))?;
    let mut out = y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

/// Integrate from `t0` to `t1` in `steps` equal RK4 steps.
pub fn rk4<const N: usize, F>(f: &F, t0: f64, y0: [f64; N], t1: f64, steps: usize) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> Result<[f64; N]> + ?Sized,
{
    let steps = steps.max(1);
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for i in 0..steps {
        y = rk4_step(f, t0 + i as f64 * h, y, h)?;
    }
    Ok(y)
}
