//! Adaptive Simpson quadrature and cumulative antiderivatives.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared fallible scalar function, the building block of nested quadratures.
pub type ScalarFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// Absolute tolerance per subinterval.
pub const QUAD_TOL: f64 = 1e-10;
const MAX_DEPTH: u32 = 40;

/// `∫_a^b f` by adaptive Simpson with Richardson correction. `b < a` is allowed.
pub fn simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = finite(f, a, a, b)?;
    let fb = finite(f, b, a, b)?;
    let m = 0.5 * (a + b);
    let fm = finite(f, m, a, b)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, tol, MAX_DEPTH)
}

fn finite<F>(f: &F, t: f64, a: f64, b: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    let v = f(t)?;
    if !v.is_finite() {
        return Err(Error::Quadrature {
            a,
            b,
            reason: format!("integrand not finite at t = {t}"),
        });
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    base_tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + ?Sized,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = finite(f, lm, a, b)?;
    let frm = finite(f, rm, a, b)?;
    let h = (b - a) / 12.0;
    let left = h * (fa + 4.0 * flm + fm);
    let right = h * (fm + 4.0 * frm + fb);
    let both = left + right;
    let delta = both - whole;
    let floor = 4.0 * f64::EPSILON * (left.abs() + right.abs());
    if delta.abs() <= 15.0 * tol.max(floor) {
        return Ok(both + delta / 15.0);
    }
    if depth == 0 || m == a || m == b {
        // Round-off in a bounded integrand can stall refinement on a tiny
        // interval; accept when the whole piece is below the base tolerance.
        let peak = [fa, flm, fm, frm, fb].iter().fold(0.0f64, |p, v| p.max(v.abs()));
        if (b - a).abs() * peak <= base_tol {
            return Ok(both);
        }
        return Err(Error::Quadrature {
            a,
            b,
            reason: "no convergence, integrand likely singular".into(),
        });
    }
    let l = step(f, a, m, fa, flm, fm, left, 0.5 * tol, base_tol, depth - 1)?;
    let r = step(f, m, b, fm, frm, fb, right, 0.5 * tol, base_tol, depth - 1)?;
    Ok(l + r)
}

/// `F(t) = c0 + ∫_{t0}^t f`, tabulated on a node set and refined on demand.
///
/// Nodes are the sorted union of the requested nodes, `t0` and any extra
/// breakpoints; cumulative sums march outward from `t0`.
#[derive(Clone)]
pub struct Antiderivative {
    f: ScalarFn,
    nodes: Vec<f64>,
    values: Vec<f64>,
    tol: f64,
}

impl std::fmt::Debug for Antiderivative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Antiderivative")
            .field("nodes", &self.nodes.len())
            .field("span", &(self.nodes.first(), self.nodes.last()))
            .finish()
    }
}

impl Antiderivative {
    pub fn new(f: ScalarFn, t0: f64, c0: f64, nodes: &[f64]) -> Result<Self> {
        Self::with_breakpoints(f, t0, c0, nodes, &[])
    }

    pub fn with_breakpoints(
        f: ScalarFn,
        t0: f64,
        c0: f64,
        nodes: &[f64],
        breaks: &[f64],
    ) -> Result<Self> {
        let mut all: Vec<f64> = nodes.iter().chain(breaks).copied().collect();
        all.push(t0);
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite quadrature node".into()));
        }
        all.sort_by(f64::total_cmp);
        all.dedup();
        let i0 = all.partition_point(|&v| v < t0);
        let mut values = vec![0.0; all.len()];
        values[i0] = c0;
        for i in i0 + 1..all.len() {
            values[i] = values[i - 1] + simpson(&*f, all[i - 1], all[i], QUAD_TOL)?;
        }
        for i in (0..i0).rev() {
            values[i] = values[i + 1] - simpson(&*f, all[i], all[i + 1], QUAD_TOL)?;
        }
        Ok(Antiderivative {
            f,
            nodes: all,
            values,
            tol: QUAD_TOL,
        })
    }

    pub fn integrand(&self) -> &ScalarFn {
        &self.f
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node_values(&self) -> &[f64] {
        &self.values
    }

    /// Value at `t`, integrating from the nearest tabulated node.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let i = self.nearest(t);
        let base = self.nodes[i];
        if base == t {
            return Ok(self.values[i]);
        }
        Ok(self.values[i] + simpson(&*self.f, base, t, self.tol)?)
    }

    fn nearest(&self, t: f64) -> usize {
        let k = self.nodes.partition_point(|&v| v < t);
        if k == 0 {
            0
        } else if k == self.nodes.len() || t - self.nodes[k - 1] <= self.nodes[k] - t {
            k - 1
        } else {
            k
        }
    }

    /// The antiderivative as a shareable function.
    pub fn into_fn(self) -> ScalarFn {
        let me = Arc::new(self);
        Arc::new(move |t| me.eval(t))
    }
}
