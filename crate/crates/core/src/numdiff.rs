//! Finite-difference derivatives: Fornberg stencils, Richardson on dense models.

use crate::error::{Error, Result};

/// Weights `w[k][j]` so that `f^(k)(z) ≈ Σ_j w[k][j] f(x[j])`, `k = 0..=m`.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    assert!(n > 0, "stencil needs at least one point");
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

const HALF: i32 = 3;

fn central(f: &dyn Fn(f64) -> Result<f64>, t: f64, h: f64, order: usize) -> Result<Vec<f64>> {
    let xs: Vec<f64> = (-HALF..=HALF).map(|k| k as f64).collect();
    let w = fornberg_weights(0.0, &xs, order);
    let mut fs = Vec::with_capacity(xs.len());
    for x in &xs {
        fs.push(f(t + x * h)?);
    }
    Ok((0..=order)
        .map(|k| {
            let s: f64 = w[k].iter().zip(&fs).map(|(a, b)| a * b).sum();
            s / h.powi(k as i32)
        })
        .collect())
}

/// Derivatives `f(t), f'(t), ..., f^(order)(t)` of a dense model by a 7-point
/// central stencil, Richardson-extrapolated over `h` and `h/2`.
pub fn derivatives(
    f: &dyn Fn(f64) -> Result<f64>,
    t: f64,
    h: f64,
    order: usize,
) -> Result<Vec<f64>> {
    if order > 5 {
        return Err(Error::InvalidArgument("numeric derivative order > 5".into()));
    }
    let coarse = central(f, t, h, order)?;
    let fine = central(f, t, 0.5 * h, order)?;
    // Leading error of the symmetric 7-point stencil: h^6 for k <= 2, h^4 for
    // k <= 4, h^2 for k = 5.
    Ok((0..=order)
        .map(|k| {
            if k == 0 {
                return fine[0];
            }
            let p = match k {
                1 | 2 => 6,
                3 | 4 => 4,
                _ => 2,
            };
            let r = 2f64.powi(p);
            (r * fine[k] - coarse[k]) / (r - 1.0)
        })
        .collect())
}

/// Derivatives at sample `z` from tabulated data, using the 7 nearest samples.
/// No Richardson step is possible on fixed samples.
pub fn sampled_derivatives(ts: &[f64], ys: &[f64], z: f64, order: usize) -> Result<Vec<f64>> {
    let n = ts.len();
    if n != ys.len() {
        return Err(Error::InvalidArgument("sample length mismatch".into()));
    }
    let width = 7.min(n);
    if width <= order {
        return Err(Error::InvalidArgument(format!(
            "{n} samples cannot give derivative order {order}"
        )));
    }
    let k = ts.partition_point(|&v| v < z);
    let start = k.saturating_sub(width / 2).min(n - width);
    let xs = &ts[start..start + width];
    let w = fornberg_weights(z, xs, order);
    Ok((0..=order)
        .map(|d| w[d].iter().zip(&ys[start..start + width]).map(|(a, b)| a * b).sum())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn classic_central_weights() {
        let w = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert_relative_eq!(w[1][0], -0.5);
        assert_relative_eq!(w[1][2], 0.5);
        assert_relative_eq!(w[2][0], 1.0);
        assert_relative_eq!(w[2][1], -2.0);
        assert_relative_eq!(w[2][2], 1.0);
    }

    #[test]
    fn dense_derivatives_of_exp() {
        let d = derivatives(&|t: f64| Ok(t.exp()), 0.3, 1e-2, 4).unwrap();
        let e = 0.3f64.exp();
        for (k, v) in d.iter().enumerate() {
            let tol = [1e-15, 1e-12, 1e-9, 1e-7, 1e-5][k];
            assert!((v - e).abs() < tol * 10.0, "k={k} err={}", v - e);
        }
    }

    #[test]
    fn sampled_polynomial_exact() {
        let ts: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = ts.iter().map(|t| t * t * t - t).collect();
        for &z in &[0.0, 0.5, 1.9] {
            let d = sampled_derivatives(&ts, &ys, z, 3).unwrap();
            assert_relative_eq!(d[1], 3.0 * z * z - 1.0, epsilon = 1e-9);
            assert_relative_eq!(d[2], 6.0 * z, epsilon = 1e-7);
            assert_relative_eq!(d[3], 6.0, epsilon = 1e-5);
        }
    }
}
