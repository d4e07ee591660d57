//! Legendre curves `(γ, ν)` in the plane and their curvature `(ℓ, β)`.
//!
//! A curve is a [`Profile`] model (anything that can produce jets at an
//! arbitrary parameter) sampled on a [`Grid`]. All geometry is read off the
//! node jets; the model is kept for evaluation between nodes.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{self, Expr, Func};
use crate::jet::Jet;
use crate::numdiff;
use crate::quad::{Antiderivative, ScalarFn};

/// Strictly increasing parameter samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    t: Vec<f64>,
}

impl Grid {
    pub fn new(t: Vec<f64>) -> Result<Grid> {
        if t.len() < 2 {
            return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
        }
        if t.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("grid contains non-finite values".into()));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("grid is not strictly increasing".into()));
        }
        Ok(Grid { t })
    }

    /// `n` equally spaced points from `min` to `max` inclusive.
    pub fn uniform(min: f64, max: f64, n: usize) -> Result<Grid> {
        if n < 2 || !(min < max) {
            return Err(Error::InvalidArgument(format!(
                "bad uniform grid {min}:{max}:{n}"
            )));
        }
        let h = (max - min) / (n - 1) as f64;
        let mut t: Vec<f64> = (0..n).map(|i| min + i as f64 * h).collect();
        t[n - 1] = max;
        Grid::new(t)
    }

    pub fn points(&self) -> &[f64] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.t[0]
    }

    pub fn max(&self) -> f64 {
        self.t[self.t.len() - 1]
    }

    pub fn nearest_index(&self, t: f64) -> usize {
        let k = self.t.partition_point(|&v| v < t);
        if k == 0 {
            0
        } else if k == self.t.len() || t - self.t[k - 1] <= self.t[k] - t {
            k - 1
        } else {
            k
        }
    }

    /// Largest spacing between neighbours.
    pub fn max_step(&self) -> f64 {
        self.t.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

/// Jets of `x, z, a, b` at one parameter value.
#[derive(Clone, Debug, PartialEq)]
pub struct PointJets {
    pub x: Jet,
    pub z: Jet,
    pub a: Jet,
    pub b: Jet,
}

impl PointJets {
    pub fn t(&self) -> f64 {
        self.x.t()
    }

    /// `ℓ = ν̇·μ = a ḃ − b ȧ`.
    pub fn ell(&self) -> Jet {
        let a = self.a.truncate(self.a.order().saturating_sub(1));
        let b = self.b.truncate(self.b.order().saturating_sub(1));
        &a * &self.b.differentiate() - &b * &self.a.differentiate()
    }

    /// `β = γ̇·μ = a ż − b ẋ`.
    pub fn beta(&self) -> Jet {
        let o = self.x.order().min(self.z.order()).saturating_sub(1);
        let a = self.a.truncate(o);
        let b = self.b.truncate(o);
        &a * &self.z.differentiate() - &b * &self.x.differentiate()
    }

    /// `γ̇·ν`.
    pub fn contact(&self) -> f64 {
        self.x.derivative(1) * self.a.value() + self.z.derivative(1) * self.b.value()
    }
}

/// A Legendre curve model that can be differentiated anywhere in its domain.
pub trait Profile: Send + Sync + fmt::Debug {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets>;

    /// Jets come from exact arithmetic rather than finite differences.
    fn exact(&self) -> bool {
        true
    }

    /// Jet of an angle `φ` with `ν = (cos φ, sin φ)`, when the model has one.
    fn phi(&self, _t: f64, _order: usize) -> Option<Result<Jet>> {
        None
    }
}

/// Profile given by four expressions in `t`.
#[derive(Clone, Debug)]
pub struct ExprProfile {
    pub x: Expr,
    pub z: Expr,
    pub a: Expr,
    pub b: Expr,
    phi: Option<Expr>,
}

impl ExprProfile {
    pub fn new(x: Expr, z: Expr, a: Expr, b: Expr) -> Self {
        ExprProfile {
            x,
            z,
            a,
            b,
            phi: None,
        }
    }

    pub fn parse(x: &str, z: &str, a: &str, b: &str) -> Result<Self> {
        Ok(Self::new(
            expr::parse(x)?,
            expr::parse(z)?,
            expr::parse(a)?,
            expr::parse(b)?,
        ))
    }

    /// `ν = (cos φ, sin φ)`.
    pub fn with_angle(x: Expr, z: Expr, phi: Expr) -> Self {
        ExprProfile {
            a: Expr::call(Func::Cos, phi.clone()),
            b: Expr::call(Func::Sin, phi.clone()),
            x,
            z,
            phi: Some(phi),
        }
    }
}

impl Profile for ExprProfile {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets> {
        Ok(PointJets {
            x: expr::eval_jet(&self.x, t, order)?,
            z: expr::eval_jet(&self.z, t, order)?,
            a: expr::eval_jet(&self.a, t, order)?,
            b: expr::eval_jet(&self.b, t, order)?,
        })
    }

    fn phi(&self, t: f64, order: usize) -> Option<Result<Jet>> {
        self.phi.as_ref().map(|p| expr::eval_jet(p, t, order))
    }
}

/// Tabulated samples; jets by 7-point finite differences (lower trust).
#[derive(Clone, Debug)]
pub struct SampledProfile {
    t: Vec<f64>,
    cols: [Vec<f64>; 4],
}

impl SampledProfile {
    pub fn new(t: Vec<f64>, x: Vec<f64>, z: Vec<f64>, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let n = t.len();
        if [x.len(), z.len(), a.len(), b.len()].iter().any(|&m| m != n) {
            return Err(Error::InvalidArgument("sample columns differ in length".into()));
        }
        if n < 7 {
            return Err(Error::InvalidArgument("need at least 7 samples".into()));
        }
        Grid::new(t.clone())?;
        Ok(SampledProfile {
            t,
            cols: [x, z, a, b],
        })
    }

    pub fn grid(&self) -> Grid {
        Grid { t: self.t.clone() }
    }
}

impl Profile for SampledProfile {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets> {
        let order = order.min(Jet::MAX_ORDER);
        let j = |k: usize| -> Result<Jet> {
            let d = numdiff::sampled_derivatives(&self.t, &self.cols[k], t, order)?;
            Ok(Jet::from_derivatives(t, &d))
        };
        Ok(PointJets {
            x: j(0)?,
            z: j(1)?,
            a: j(2)?,
            b: j(3)?,
        })
    }

    fn exact(&self) -> bool {
        false
    }
}

/// Jets of a dense model by Richardson-extrapolated central differences of its
/// values. Used where exact recursion is unavailable.
pub fn numeric_point_jets(p: &dyn Profile, t: f64, h: f64, order: usize) -> Result<PointJets> {
    let comp = |k: usize| -> Result<Jet> {
        let f = |s: f64| -> Result<f64> {
            let v = p.jets(s, 0)?;
            Ok([v.x.value(), v.z.value(), v.a.value(), v.b.value()][k])
        };
        Ok(Jet::from_derivatives(t, &numdiff::derivatives(&f, t, h, order)?))
    };
    Ok(PointJets {
        x: comp(0)?,
        z: comp(1)?,
        a: comp(2)?,
        b: comp(3)?,
    })
}

/// Per-node jets of `γ = (x, z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveJet {
    pub t: Vec<f64>,
    pub x: Vec<Jet>,
    pub z: Vec<Jet>,
}

/// Per-node jets of `ν = (a, b)` and optionally its angle.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalJet {
    pub a: Vec<Jet>,
    pub b: Vec<Jet>,
    pub phi: Option<Vec<Jet>>,
}

/// Per-node jets of `(ℓ, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvaturePair {
    pub ell: Vec<Jet>,
    pub beta: Vec<Jet>,
    /// False when the jets came from finite differences of samples.
    pub exact: bool,
}

/// Jet order sampled at every node.
pub const NODE_ORDER: usize = 5;

#[derive(Clone)]
pub struct LegendreCurve {
    grid: Grid,
    pub curve: CurveJet,
    pub normal: NormalJet,
    pub curvature: CurvaturePair,
    model: Arc<dyn Profile>,
}

impl fmt::Debug for LegendreCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LegendreCurve")
            .field("nodes", &self.grid.len())
            .field("model", &self.model)
            .finish()
    }
}

impl LegendreCurve {
    pub fn sample(model: Arc<dyn Profile>, grid: Grid) -> Result<Self> {
        let n = grid.len();
        let mut x = Vec::with_capacity(n);
        let mut z = Vec::with_capacity(n);
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        let mut ell = Vec::with_capacity(n);
        let mut beta = Vec::with_capacity(n);
        let mut phi = Some(Vec::with_capacity(n));
        for &t in grid.points() {
            let p = model.jets(t, NODE_ORDER)?;
            ell.push(p.ell());
            beta.push(p.beta());
            match (model.phi(t, NODE_ORDER), phi.as_mut()) {
                (Some(j), Some(v)) => v.push(j?),
                _ => phi = None,
            }
            x.push(p.x);
            z.push(p.z);
            a.push(p.a);
            b.push(p.b);
        }
        let exact = model.exact();
        Ok(LegendreCurve {
            curve: CurveJet {
                t: grid.points().to_vec(),
                x,
                z,
            },
            normal: NormalJet { a, b, phi },
            curvature: CurvaturePair { ell, beta, exact },
            grid,
            model,
        })
    }

    pub fn from_exprs(p: ExprProfile, grid: Grid) -> Result<Self> {
        Self::sample(Arc::new(p), grid)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn model(&self) -> &Arc<dyn Profile> {
        &self.model
    }

    pub fn exact(&self) -> bool {
        self.curvature.exact
    }

    /// Node `i` as a [`PointJets`].
    pub fn node(&self, i: usize) -> PointJets {
        PointJets {
            x: self.curve.x[i].clone(),
            z: self.curve.z[i].clone(),
            a: self.normal.a[i].clone(),
            b: self.normal.b[i].clone(),
        }
    }

    /// Jets anywhere in the model's domain.
    pub fn jets_at(&self, t: f64, order: usize) -> Result<PointJets> {
        self.model.jets(t, order)
    }

    pub fn point(&self, i: usize) -> [f64; 2] {
        [self.curve.x[i].value(), self.curve.z[i].value()]
    }

    pub fn normal_at(&self, i: usize) -> [f64; 2] {
        [self.normal.a[i].value(), self.normal.b[i].value()]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LegendreReport {
    pub max_contact_residual: f64,
    pub max_norm_residual: f64,
    pub pass: bool,
}

/// Maxima over the grid of `|γ̇·ν|` and `|‖ν‖ − 1|`.
pub fn verify_legendre(c: &LegendreCurve, tol: f64) -> LegendreReport {
    let mut contact = 0.0f64;
    let mut norm = 0.0f64;
    for i in 0..c.len() {
        contact = contact.max(c.node(i).contact().abs());
        let [a, b] = c.normal_at(i);
        norm = norm.max((a.hypot(b) - 1.0).abs());
    }
    LegendreReport {
        max_contact_residual: contact,
        max_norm_residual: norm,
        pass: contact <= tol && norm <= tol,
    }
}

pub fn curvature_of(c: &LegendreCurve) -> CurvaturePair {
    c.curvature.clone()
}

/// Integration constants for [`reconstruct_from_curvature`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Constants {
    pub theta0: f64,
    pub x0: f64,
    pub z0: f64,
}

/// Curve rebuilt from `(ℓ, β)`; antiderivatives anchored at the grid's left end.
pub struct CurvatureProfile {
    ell: Expr,
    beta: Expr,
    theta: Arc<Antiderivative>,
    x: Antiderivative,
    z: Antiderivative,
}

impl fmt::Debug for CurvatureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurvatureProfile(ell = {}, beta = {})", self.ell, self.beta)
    }
}

impl CurvatureProfile {
    pub fn new(ell: Expr, beta: Expr, grid: &Grid, k: Constants) -> Result<Self> {
        let t0 = grid.min();
        let e = ell.clone();
        let theta = Arc::new(Antiderivative::new(
            Arc::new(move |t| expr::eval(&e, t)),
            t0,
            k.theta0,
            grid.points(),
        )?);
        let trig = |use_sin: bool| -> ScalarFn {
            let th = Arc::clone(&theta);
            let bt = beta.clone();
            Arc::new(move |t| {
                let s = th.eval(t)?;
                let w = if use_sin { -s.sin() } else { s.cos() };
                Ok(expr::eval(&bt, t)? * w)
            })
        };
        let x = Antiderivative::new(trig(true), t0, k.x0, grid.points())?;
        let z = Antiderivative::new(trig(false), t0, k.z0, grid.points())?;
        Ok(CurvatureProfile {
            ell,
            beta,
            theta,
            x,
            z,
        })
    }
}

impl Profile for CurvatureProfile {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets> {
        let lo = order.saturating_sub(1);
        let ell = expr::eval_jet(&self.ell, t, lo)?;
        let beta = expr::eval_jet(&self.beta, t, lo)?;
        let theta = ell.integrate(self.theta.eval(t)?, order);
        let (s, c) = (theta.sin(), theta.cos());
        let s_lo = s.truncate(lo);
        let c_lo = c.truncate(lo);
        let xd = -(&beta * &s_lo);
        let zd = &beta * &c_lo;
        let (x, z) = if order == 0 {
            (
                Jet::constant(t, self.x.eval(t)?, 0),
                Jet::constant(t, self.z.eval(t)?, 0),
            )
        } else {
            (
                xd.integrate(self.x.eval(t)?, order),
                zd.integrate(self.z.eval(t)?, order),
            )
        };
        Ok(PointJets { x, z, a: c, b: s })
    }

    fn phi(&self, t: f64, order: usize) -> Option<Result<Jet>> {
        Some((|| {
            let ell = expr::eval_jet(&self.ell, t, order.saturating_sub(1))?;
            Ok(ell.integrate(self.theta.eval(t)?, order))
        })())
    }
}

/// Curve with curvature `(ℓ, β)`: `θ = θ₀ + ∫ℓ`, `ν = (cos θ, sin θ)`,
/// `γ = (x₀ − ∫β sin θ, z₀ + ∫β cos θ)`.
pub fn reconstruct_from_curvature(
    ell: &Expr,
    beta: &Expr,
    grid: &Grid,
    k: Constants,
) -> Result<LegendreCurve> {
    let p = CurvatureProfile::new(ell.clone(), beta.clone(), grid, k)?;
    LegendreCurve::sample(Arc::new(p), grid.clone())
}

/// `γ + λν` with the same normal.
#[derive(Debug)]
pub struct ParallelProfile {
    base: Arc<dyn Profile>,
    lambda: f64,
}

impl Profile for ParallelProfile {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets> {
        let p = self.base.jets(t, order)?;
        Ok(PointJets {
            x: &p.x + &p.a.scale(self.lambda),
            z: &p.z + &p.b.scale(self.lambda),
            a: p.a,
            b: p.b,
        })
    }

    fn exact(&self) -> bool {
        self.base.exact()
    }

    fn phi(&self, t: f64, order: usize) -> Option<Result<Jet>> {
        self.base.phi(t, order)
    }
}

/// Largest deviation of `c` from the curve rebuilt out of its own `(ℓ, β)`,
/// with the constants read off at the first node.
pub fn round_trip_residual(c: &LegendreCurve) -> Result<f64> {
    let ts = c.grid().points();
    let t0 = ts[0];
    let [a0, b0] = c.normal_at(0);
    let [x0, z0] = c.point(0);
    let m = Arc::clone(c.model());
    let theta = Arc::new(Antiderivative::new(
        Arc::new(move |t| Ok(m.jets(t, 1)?.ell().value())),
        t0,
        b0.atan2(a0),
        ts,
    )?);
    let trig = |use_sin: bool| -> ScalarFn {
        let (th, m) = (Arc::clone(&theta), Arc::clone(c.model()));
        Arc::new(move |t| {
            let s = th.eval(t)?;
            let w = if use_sin { -s.sin() } else { s.cos() };
            Ok(m.jets(t, 1)?.beta().value() * w)
        })
    };
    let x = Antiderivative::new(trig(true), t0, x0, ts)?;
    let z = Antiderivative::new(trig(false), t0, z0, ts)?;
    let mut worst = 0.0f64;
    for (i, &t) in ts.iter().enumerate() {
        let th = theta.eval(t)?;
        let [xi, zi] = c.point(i);
        let [ai, bi] = c.normal_at(i);
        for d in [x.eval(t)? - xi, z.eval(t)? - zi, th.cos() - ai, th.sin() - bi] {
            worst = worst.max(d.abs());
        }
    }
    Ok(worst)
}

/// Parallel curve; its curvature is `(ℓ, β + λℓ)`.
pub fn parallel_curve(c: &LegendreCurve, lambda: f64) -> Result<LegendreCurve> {
    let p = ParallelProfile {
        base: Arc::clone(&c.model),
        lambda,
    };
    LegendreCurve::sample(Arc::new(p), c.grid.clone())
}

/// Scale-aware test for `ℓ ≠ 0` along the whole grid.
pub fn ell_nonvanishing_threshold(c: &LegendreCurve) -> f64 {
    let max = c
        .curvature
        .ell
        .iter()
        .map(|j| j.value().abs())
        .fold(0.0, f64::max);
    1e-8 * (1.0 + max)
}

/// `Ev(γ) = γ − (β/ℓ) ν`, the locus of centres of curvature.
pub fn plane_evolute(c: &LegendreCurve) -> Result<CurveJet> {
    let thr = ell_nonvanishing_threshold(c);
    let mut x = Vec::with_capacity(c.len());
    let mut z = Vec::with_capacity(c.len());
    for i in 0..c.len() {
        let ell = &c.curvature.ell[i];
        let t = c.grid.points()[i];
        if ell.value().abs() <= thr {
            return Err(Error::VanishingCurvature { t });
        }
        let r = c.curvature.beta[i].checked_div(ell)?;
        let o = r.order();
        x.push(c.curve.x[i].truncate(o) - &r * &c.normal.a[i].truncate(o));
        z.push(c.curve.z[i].truncate(o) - &r * &c.normal.b[i].truncate(o));
    }
    Ok(CurveJet {
        t: c.grid.points().to_vec(),
        x,
        z,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Alignment {
    /// Angle of the rotation `A` with `A ν₁ = ν₂` at the middle sample.
    pub rotation_angle: f64,
    pub translation: [f64; 2],
    /// Largest `‖A γ₁ + a − γ₂‖` after alignment.
    pub residual: f64,
}

fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Rotation fixed by the normals at the middle sample; translation by least
/// squares (the mean offset).
pub fn congruence_align(c1: &LegendreCurve, c2: &LegendreCurve) -> Result<Alignment> {
    if c1.len() != c2.len() {
        return Err(Error::InvalidArgument(format!(
            "grid lengths differ: {} vs {}",
            c1.len(),
            c2.len()
        )));
    }
    let m = c1.len() / 2;
    let [a1, b1] = c1.normal_at(m);
    let [a2, b2] = c2.normal_at(m);
    let angle = wrap_angle(b2.atan2(a2) - b1.atan2(a1));
    let (s, c) = angle.sin_cos();
    let rot = |p: [f64; 2]| [c * p[0] - s * p[1], s * p[0] + c * p[1]];
    let n = c1.len() as f64;
    let mut tr = [0.0; 2];
    for i in 0..c1.len() {
        let r = rot(c1.point(i));
        let q = c2.point(i);
        tr[0] += (q[0] - r[0]) / n;
        tr[1] += (q[1] - r[1]) / n;
    }
    let mut residual = 0.0f64;
    for i in 0..c1.len() {
        let r = rot(c1.point(i));
        let q = c2.point(i);
        residual = residual.max((r[0] + tr[0] - q[0]).hypot(r[1] + tr[1] - q[1]));
    }
    Ok(Alignment {
        rotation_angle: angle,
        translation: tr,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn round_trip_of_a_parabola() {
        let p = ExprProfile::parse("t", "t^2/2", "-t/sqrt(1+t^2)", "1/sqrt(1+t^2)").unwrap();
        let c = LegendreCurve::from_exprs(p, Grid::uniform(-1.0, 1.0, 21).unwrap()).unwrap();
        assert!(round_trip_residual(&c).unwrap() < 1e-10);
    }

    fn curve(x: &str, z: &str, a: &str, b: &str, grid: Grid) -> LegendreCurve {
        LegendreCurve::from_exprs(ExprProfile::parse(x, z, a, b).unwrap(), grid).unwrap()
    }

    fn circle() -> LegendreCurve {
        curve("cos(t)", "sin(t)", "cos(t)", "sin(t)", Grid::uniform(0.0, 6.0, 61).unwrap())
    }

    fn pseudo_sphere() -> LegendreCurve {
        curve(
            "sin(t)",
            "cos(t) + log(tan(t/2))",
            "cos(t)",
            "-sin(t)",
            Grid::uniform(0.3, PI - 0.3, 81).unwrap(),
        )
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![0.0]).is_err());
        assert!(Grid::new(vec![0.0, 0.0]).is_err());
        assert!(Grid::new(vec![1.0, 0.0]).is_err());
        assert!(Grid::uniform(1.0, 0.0, 10).is_err());
        let g = Grid::uniform(0.0, 1.0, 11).unwrap();
        assert_eq!(g.nearest_index(0.26), 3);
        assert_eq!(g.nearest_index(-5.0), 0);
        assert_eq!(g.nearest_index(5.0), 10);
    }

    #[test]
    fn circle_is_legendre_with_unit_curvature() {
        let c = circle();
        let r = verify_legendre(&c, 1e-12);
        assert!(r.pass, "{r:?}");
        let k = curvature_of(&c);
        for i in 0..c.len() {
            assert_relative_eq!(k.ell[i].value(), 1.0, epsilon = 1e-14);
            assert_relative_eq!(k.beta[i].value(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn pseudo_sphere_curvature() {
        let c = pseudo_sphere();
        let r = verify_legendre(&c, 1e-12);
        assert!(r.pass, "{r:?}");
        for (i, &t) in c.grid().points().iter().enumerate() {
            assert_relative_eq!(c.curvature.ell[i].value(), -1.0, epsilon = 1e-13);
            assert_relative_eq!(c.curvature.beta[i].value(), 1.0 / t.tan(), epsilon = 1e-12);
        }
    }

    #[test]
    fn non_orthogonal_normal_fails() {
        let c = curve("t", "t", "1", "0", Grid::uniform(0.0, 1.0, 5).unwrap());
        let r = verify_legendre(&c, 1e-9);
        assert!(!r.pass);
        assert_relative_eq!(r.max_contact_residual, 1.0);
    }

    #[test]
    fn stationary_point() {
        let c = curve("2", "3", "1", "0", Grid::uniform(0.0, 1.0, 5).unwrap());
        for i in 0..c.len() {
            assert_eq!(c.curvature.ell[i].value(), 0.0);
            assert_eq!(c.curvature.beta[i].value(), 0.0);
        }
    }

    #[test]
    fn reconstruct_circle() {
        let grid = Grid::uniform(0.0, 3.0, 31).unwrap();
        let one = expr::parse("1").unwrap();
        let k = Constants {
            theta0: PI / 2.0,
            ..Default::default()
        };
        let c = reconstruct_from_curvature(&one, &one, &grid, k).unwrap();
        let reference = curve("cos(t)", "sin(t)", "cos(t)", "sin(t)", grid);
        let al = congruence_align(&c, &reference).unwrap();
        assert!(al.residual < 1e-9, "{al:?}");
        assert!(verify_legendre(&c, 1e-9).pass);
    }

    #[test]
    fn reconstruct_segment() {
        let grid = Grid::uniform(0.0, 1.0, 11).unwrap();
        let c = reconstruct_from_curvature(
            &expr::parse("0").unwrap(),
            &expr::parse("1").unwrap(),
            &grid,
            Constants::default(),
        )
        .unwrap();
        for (i, &t) in grid.points().iter().enumerate() {
            assert_relative_eq!(c.point(i)[0], 0.0, epsilon = 1e-14);
            assert_relative_eq!(c.point(i)[1], t, epsilon = 1e-12);
            assert_eq!(c.normal_at(i), [1.0, 0.0]);
        }
    }

    #[test]
    fn reconstruct_pseudo_sphere() {
        let grid = Grid::uniform(0.3, PI - 0.3, 81).unwrap();
        let c = reconstruct_from_curvature(
            &expr::parse("-1").unwrap(),
            &expr::parse("cot(t)").unwrap(),
            &grid,
            Constants::default(),
        )
        .unwrap();
        let al = congruence_align(&c, &pseudo_sphere()).unwrap();
        assert!(al.residual < 1e-8, "{al:?}");
    }

    #[test]
    fn parallel_of_circle_collapses() {
        let c = circle();
        let p = parallel_curve(&c, -1.0).unwrap();
        for i in 0..p.len() {
            assert!(p.point(i)[0].abs() < 1e-15 && p.point(i)[1].abs() < 1e-15);
            assert_relative_eq!(p.curvature.ell[i].value(), 1.0, epsilon = 1e-14);
            assert!(p.curvature.beta[i].value().abs() < 1e-14);
        }
        let id = parallel_curve(&c, 0.0).unwrap();
        assert_eq!(id.curve, c.curve);
    }

    #[test]
    fn parallel_of_pseudo_sphere() {
        let c = pseudo_sphere();
        let p = parallel_curve(&c, 2.0).unwrap();
        for (i, &t) in c.grid().points().iter().enumerate() {
            assert_relative_eq!(p.curvature.beta[i].value(), 1.0 / t.tan() - 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn evolute_of_circle_is_centre() {
        let e = plane_evolute(&circle()).unwrap();
        for i in 0..e.t.len() {
            assert!(e.x[i].value().abs() < 1e-15 && e.z[i].value().abs() < 1e-15);
        }
    }

    #[test]
    fn evolute_of_pseudo_sphere() {
        let c = pseudo_sphere();
        let e = plane_evolute(&c).unwrap();
        for (i, &t) in c.grid().points().iter().enumerate() {
            let cot = 1.0 / t.tan();
            assert_relative_eq!(e.x[i].value(), t.sin() + cot * t.cos(), epsilon = 1e-12);
            let z = t.cos() + (t / 2.0).tan().ln() - cot * t.sin();
            assert_relative_eq!(e.z[i].value(), z, epsilon = 1e-12);
        }
    }

    #[test]
    fn evolute_of_fixed_point_is_the_point() {
        let c = curve("1", "2", "cos(t)", "sin(t)", Grid::uniform(0.0, 1.0, 5).unwrap());
        let e = plane_evolute(&c).unwrap();
        assert!(e.x.iter().all(|j| j.value() == 1.0));
        assert!(e.z.iter().all(|j| j.value() == 2.0));
    }

    #[test]
    fn evolute_needs_curvature() {
        let c = curve("0", "t", "1", "0", Grid::uniform(0.0, 1.0, 5).unwrap());
        assert!(matches!(plane_evolute(&c), Err(Error::VanishingCurvature { .. })));
    }

    #[test]
    fn align_rotated_copy() {
        let g = Grid::uniform(0.0, 2.0, 21).unwrap();
        let c1 = curve("t", "t^2/2", "-t/sqrt(1+t^2)", "1/sqrt(1+t^2)", g.clone());
        let (s, c) = (PI / 3.0).sin_cos();
        let x2 = format!("{c}*t - {s}*t^2/2 + 1");
        let z2 = format!("{s}*t + {c}*t^2/2 + 2");
        let a2 = format!("({c}*(-t) - {s})/sqrt(1+t^2)");
        let b2 = format!("({s}*(-t) + {c})/sqrt(1+t^2)");
        let c2 = curve(&x2, &z2, &a2, &b2, g);
        let al = congruence_align(&c1, &c2).unwrap();
        assert_relative_eq!(al.rotation_angle, PI / 3.0, epsilon = 1e-12);
        assert_relative_eq!(al.translation[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(al.translation[1], 2.0, epsilon = 1e-12);
        assert!(al.residual <= 1e-12);
    }

    #[test]
    fn circle_and_ellipse_not_congruent() {
        let g = Grid::uniform(0.0, 6.0, 61).unwrap();
        let e = curve(
            "2*cos(t)",
            "sin(t)",
            "cos(t)/sqrt(cos(t)^2+4*sin(t)^2)",
            "2*sin(t)/sqrt(cos(t)^2+4*sin(t)^2)",
            g,
        );
        assert!(verify_legendre(&e, 1e-12).pass);
        let al = congruence_align(&circle(), &e).unwrap();
        assert!(al.residual > 0.1);
    }

    #[test]
    fn sampled_profile_jets() {
        let g = Grid::uniform(0.0, 3.0, 301).unwrap();
        let t = g.points().to_vec();
        let p = SampledProfile::new(
            t.clone(),
            t.iter().map(|v| v.cos()).collect(),
            t.iter().map(|v| v.sin()).collect(),
            t.iter().map(|v| v.cos()).collect(),
            t.iter().map(|v| v.sin()).collect(),
        )
        .unwrap();
        let c = LegendreCurve::sample(Arc::new(p), g).unwrap();
        assert!(!c.exact());
        for i in 0..c.len() {
            assert!((c.curvature.ell[i].value() - 1.0).abs() < 1e-9);
            assert!((c.curvature.beta[i].value() - 1.0).abs() < 1e-9);
        }
    }
}
