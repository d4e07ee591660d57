//! Surfaces of revolution of a Legendre curve around the x- and z-axes.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::framed::{
    self, BasicInvariants, FrameNode, FramedSurfaceGrid, InvariantDerivs, Invariants, Partials,
    V3,
};
use crate::jet::Jet;
use crate::legendre::{self, LegendreCurve, PointJets, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Z,
}

impl std::str::FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Axis> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "z" | "Z" => Ok(Axis::Z),
            _ => Err(Error::InvalidArgument(format!("axis must be x or z, got {s:?}"))),
        }
    }
}

pub const DEFAULT_N_THETA: usize = 128;

/// Uniform samples of `[0, 2π)`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

#[derive(Clone, Debug)]
pub struct RevolutionSurface {
    pub axis: Axis,
    pub profile: LegendreCurve,
    pub theta: Vec<f64>,
    /// Realized frame and partials at every `(t, θ)` node.
    pub surface: FramedSurfaceGrid,
    /// Invariants from the closed-form matrices; identical along θ rows.
    pub closed_form: BasicInvariants,
}

impl RevolutionSurface {
    pub fn n_t(&self) -> usize {
        self.profile.len()
    }

    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn point(&self, i: usize, k: usize) -> V3 {
        self.surface.nodes[self.surface.index(i, k)].x.val
    }
}

/// Point of the revolute of profile point `(x, z)` at angle `θ`.
pub fn surface_point(axis: Axis, x: f64, z: f64, th: f64) -> V3 {
    let (sn, cs) = th.sin_cos();
    match axis {
        Axis::Z => [x * cs, x * sn, z],
        Axis::X => [x, z * cs, z * sn],
    }
}

/// Unit normal `n` of the revolute for profile normal `(a, b)` at angle `θ`.
pub fn surface_normal(axis: Axis, a: f64, b: f64, th: f64) -> V3 {
    let (sn, cs) = th.sin_cos();
    match axis {
        Axis::Z => [a * cs, a * sn, b],
        Axis::X => [-a, -b * cs, -b * sn],
    }
}

fn frame_node(axis: Axis, p: &PointJets, th: f64) -> FrameNode {
    let (sn, cs) = th.sin_cos();
    let (x, xd) = (p.x.value(), p.x.derivative(1));
    let (z, zd) = (p.z.value(), p.z.derivative(1));
    let (a, ad) = (p.a.value(), p.a.derivative(1));
    let (b, bd) = (p.b.value(), p.b.derivative(1));
    match axis {
        Axis::Z => FrameNode {
            x: Partials {
                val: [x * cs, x * sn, z],
                du: [xd * cs, xd * sn, zd],
                dv: [-x * sn, x * cs, 0.0],
                duv: Some([-xd * sn, xd * cs, 0.0]),
            },
            n: Partials {
                val: [a * cs, a * sn, b],
                du: [ad * cs, ad * sn, bd],
                dv: [-a * sn, a * cs, 0.0],
                duv: Some([-ad * sn, ad * cs, 0.0]),
            },
            s: Partials {
                val: [sn, -cs, 0.0],
                du: [0.0; 3],
                dv: [cs, sn, 0.0],
                duv: Some([0.0; 3]),
            },
        },
        Axis::X => FrameNode {
            x: Partials {
                val: [x, z * cs, z * sn],
                du: [xd, zd * cs, zd * sn],
                dv: [0.0, -z * sn, z * cs],
                duv: Some([0.0, -zd * sn, zd * cs]),
            },
            n: Partials {
                val: [-a, -b * cs, -b * sn],
                du: [-ad, -bd * cs, -bd * sn],
                dv: [0.0, b * sn, -b * cs],
                duv: Some([0.0, bd * sn, -bd * cs]),
            },
            s: Partials {
                val: [0.0, sn, -cs],
                du: [0.0; 3],
                dv: [0.0, cs, sn],
                duv: Some([0.0; 3]),
            },
        },
    }
}

/// The closed-form invariants and their t-derivatives at one profile node.
pub fn closed_form_invariants(axis: Axis, p: &PointJets) -> (Invariants, InvariantDerivs) {
    let ell = p.ell().value();
    let beta = p.beta().value();
    let (x, xd) = (p.x.value(), p.x.derivative(1));
    let (z, zd) = (p.z.value(), p.z.derivative(1));
    let (a, ad) = (p.a.value(), p.a.derivative(1));
    let (b, bd) = (p.b.value(), p.b.derivative(1));
    match axis {
        Axis::Z => (
            Invariants {
                b1: -beta,
                a2: -x,
                f1: -ell,
                e2: -a,
                g2: b,
                ..Default::default()
            },
            InvariantDerivs {
                a2_u: -xd,
                e2_u: -ad,
                g2_u: bd,
                ..Default::default()
            },
        ),
        Axis::X => (
            Invariants {
                b1: -beta,
                a2: -z,
                f1: ell,
                e2: b,
                g2: -a,
                ..Default::default()
            },
            InvariantDerivs {
                a2_u: -zd,
                e2_u: bd,
                g2_u: -ad,
                ..Default::default()
            },
        ),
    }
}

pub fn revolve(c: &LegendreCurve, axis: Axis, n_theta: usize) -> Result<RevolutionSurface> {
    if n_theta < 8 {
        return Err(Error::InvalidArgument(format!(
            "n_theta must be at least 8, got {n_theta}"
        )));
    }
    let theta = theta_grid(n_theta);
    let mut nodes = Vec::with_capacity(c.len() * n_theta);
    let mut values = Vec::with_capacity(c.len() * n_theta);
    let mut derivs = Vec::with_capacity(c.len() * n_theta);
    for i in 0..c.len() {
        let p = c.node(i);
        let (inv, d) = closed_form_invariants(axis, &p);
        for &th in &theta {
            nodes.push(frame_node(axis, &p, th));
            values.push(inv);
            derivs.push(d);
        }
    }
    let surface = FramedSurfaceGrid::new(c.grid().points().to_vec(), theta.clone(), nodes)?;
    Ok(RevolutionSurface {
        axis,
        profile: c.clone(),
        theta,
        surface,
        closed_form: BasicInvariants {
            nu: c.len(),
            nv: n_theta,
            values,
            derivs: Some(derivs),
        },
    })
}

/// `(J, K, H)` and the concomitant extras of a revolute at one parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RevolutionCurvature {
    pub t: f64,
    pub j: f64,
    pub k: f64,
    pub h: f64,
    pub extras: [f64; 5],
}

pub fn curvature_at(axis: Axis, p: &PointJets) -> RevolutionCurvature {
    let ell = p.ell().value();
    let beta = p.beta().value();
    let (x, z, a, b) = (p.x.value(), p.z.value(), p.a.value(), p.b.value());
    let (j, k, h, extras) = match axis {
        Axis::Z => (
            -beta * x,
            -a * ell,
            0.5 * (x * ell + beta * a),
            [0.0, -beta * b, 0.0, -ell * b, 0.0],
        ),
        Axis::X => (
            -beta * z,
            -b * ell,
            -0.5 * (z * ell + beta * b),
            [0.0, beta * a, 0.0, -ell * a, 0.0],
        ),
    };
    RevolutionCurvature {
        t: p.t(),
        j,
        k,
        h,
        extras,
    }
}

pub fn revolution_curvature(c: &LegendreCurve, axis: Axis) -> Vec<RevolutionCurvature> {
    (0..c.len()).map(|i| curvature_at(axis, &c.node(i))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrontStatus {
    /// Always true: the revolute of a Legendre curve is a frontal.
    pub surface_frontal: bool,
    pub surface_front: bool,
    /// Parameters where `(ℓ, β)` vanishes jointly.
    pub witnesses: Vec<f64>,
}

pub fn frontal_front_status(c: &LegendreCurve, tol: f64) -> FrontStatus {
    let witnesses: Vec<f64> = (0..c.len())
        .filter(|&i| {
            c.curvature.ell[i].value().abs() + c.curvature.beta[i].value().abs() <= tol
        })
        .map(|i| c.grid().points()[i])
        .collect();
    FrontStatus {
        surface_frontal: true,
        surface_front: witnesses.is_empty(),
        witnesses,
    }
}

fn max_abs(v: impl Iterator<Item = f64>) -> f64 {
    v.map(f64::abs).fold(0.0, f64::max)
}

/// The x- and z-revolutes are congruent as framed surfaces: `ℓ ≡ 0`,
/// `ν ≡ ±(1/√2, −1/√2)` and `x ≡ z`.
pub fn xz_congruence_check(c: &LegendreCurve, tol: f64) -> bool {
    let n = c.len();
    let ell = max_abs(c.curvature.ell.iter().map(Jet::value));
    let diag = max_abs((0..n).map(|i| {
        let [a, b] = c.normal_at(i);
        (a.abs() - FRAC_1_SQRT_2).abs() + (a + b).abs()
    }));
    let xz = max_abs((0..n).map(|i| c.point(i)[0] - c.point(i)[1]));
    ell <= tol && diag <= tol && xz <= tol
}

/// `x(t₀) = 0` with `β, a, b` nonzero there: the revolute is a cone.
pub fn cone_type_check(c: &LegendreCurve, t0: f64, tol: f64) -> Result<bool> {
    let p = c.jets_at(t0, 1)?;
    Ok(cone_type_at(&p, tol))
}

pub fn cone_type_at(p: &PointJets, tol: f64) -> bool {
    p.x.value().abs() <= tol
        && p.beta().value().abs() > tol
        && p.a.value().abs() > tol
        && p.b.value().abs() > tol
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlatClass {
    Cone,
    Cylinder,
    Plane,
    Line,
    Circle,
    Point,
    NotFlat,
}

/// Which flat revolute (`K ≡ 0`, i.e. `ℓ ≡ 0`) the profile gives.
pub fn flat_classification(c: &LegendreCurve, tol: f64) -> FlatClass {
    let n = c.len();
    if max_abs(c.curvature.ell.iter().map(Jet::value)) > tol {
        return FlatClass::NotFlat;
    }
    let x_zero = max_abs((0..n).map(|i| c.point(i)[0])) <= tol;
    if max_abs(c.curvature.beta.iter().map(Jet::value)) <= tol {
        return if x_zero {
            FlatClass::Point
        } else {
            FlatClass::Circle
        };
    }
    if x_zero {
        return FlatClass::Line;
    }
    // ν is constant; a vertical line (b = 0) sweeps a cylinder, a horizontal
    // one (a = 0) a plane.
    let [a, b] = c.normal_at(n / 2);
    if b.abs() <= tol {
        FlatClass::Cylinder
    } else if a.abs() <= tol {
        FlatClass::Plane
    } else {
        FlatClass::Cone
    }
}

/// `γ − (β/ℓ)ν` as a Legendre curve with normal `μ = (−b, a)`.
#[derive(Debug)]
pub struct EvoluteProfile {
    base: Arc<dyn Profile>,
}

impl Profile for EvoluteProfile {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets> {
        let p = self.base.jets(t, (order + 1).min(Jet::MAX_ORDER))?;
        let r = p.beta().checked_div(&p.ell())?;
        let o = r.order();
        let (a, b) = (p.a.truncate(o), p.b.truncate(o));
        Ok(PointJets {
            x: p.x.truncate(o) - &r * &a,
            z: p.z.truncate(o) - &r * &b,
            a: -b,
            b: a,
        })
    }

    fn exact(&self) -> bool {
        self.base.exact()
    }
}

/// Extension of the axis evolute across a zero of `a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisExtension {
    pub t: f64,
    pub left: f64,
    pub right: f64,
    /// Set when the one-sided extrapolations agree within [`EXTENSION_TOL`].
    pub value: Option<f64>,
}

pub const EXTENSION_TOL: f64 = 1e-6;

/// `(0, 0, z − x b / a)` on the profile grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisEvolute {
    pub t: Vec<f64>,
    /// `None` at nodes where `a` vanishes and no extension was accepted.
    pub z: Vec<Option<f64>>,
    pub extensions: Vec<AxisExtension>,
}

impl AxisEvolute {
    pub fn continuous(&self) -> bool {
        self.z.iter().all(Option::is_some) && self.extensions.iter().all(|e| e.value.is_some())
    }
}

#[derive(Clone, Debug)]
pub struct RevolutionEvolutes {
    pub profile_evolute: Option<RevolutionSurface>,
    pub axis_evolute: Option<AxisEvolute>,
    pub diagnostics: Vec<String>,
}

fn cubic_extrapolate(ts: &[f64], ys: &[f64], t: f64) -> f64 {
    let w = crate::numdiff::fornberg_weights(t, ts, 0);
    w[0].iter().zip(ys).map(|(a, b)| a * b).sum()
}

fn axis_value(p: &PointJets) -> f64 {
    p.z.value() - p.x.value() * p.b.value() / p.a.value()
}

/// Bisection on `a` between two nodes where it changes sign.
fn bracket_zero(c: &LegendreCurve, mut lo: f64, mut hi: f64) -> Result<f64> {
    let a_at = |t: f64| -> Result<f64> { Ok(c.jets_at(t, 0)?.a.value()) };
    let mut flo = a_at(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = a_at(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn extend(t: f64, ts: &[f64], vals: &[Option<f64>], i_left: usize, i_right: usize) -> AxisExtension {
    let side = |range: Vec<usize>| -> Option<f64> {
        let idx: Vec<usize> = range.into_iter().filter(|&i| vals[i].is_some()).take(4).collect();
        if idx.len() < 4 {
            return None;
        }
        let xs: Vec<f64> = idx.iter().map(|&i| ts[i]).collect();
        let ys: Vec<f64> = idx.iter().map(|&i| vals[i].unwrap()).collect();
        Some(cubic_extrapolate(&xs, &ys, t))
    };
    let left = side((0..=i_left).rev().collect());
    let right = side((i_right..ts.len()).collect());
    let (l, r) = (left.unwrap_or(f64::NAN), right.unwrap_or(f64::NAN));
    let value = ((l - r).abs() <= EXTENSION_TOL).then_some(0.5 * (l + r));
    AxisExtension {
        t,
        left: l,
        right: r,
        value,
    }
}

/// Both evolutes of the z-axis revolute, each where its formula is defined.
pub fn revolution_evolutes(c: &LegendreCurve, n_theta: usize) -> Result<RevolutionEvolutes> {
    let mut diagnostics = Vec::new();
    let ts = c.grid().points();
    let n = c.len();

    let ell_thr = legendre::ell_nonvanishing_threshold(c);
    let profile_evolute = match (0..n).find(|&i| c.curvature.ell[i].value().abs() <= ell_thr) {
        Some(i) => {
            diagnostics.push(format!("ell vanishes at t = {}; no profile evolute", ts[i]));
            None
        }
        None => {
            let ev = EvoluteProfile {
                base: Arc::clone(c.model()),
            };
            let curve = LegendreCurve::sample(Arc::new(ev), c.grid().clone())?;
            Some(revolve(&curve, Axis::Z, n_theta)?)
        }
    };

    let a: Vec<f64> = (0..n).map(|i| c.normal_at(i)[0]).collect();
    let a_thr = 1e-8 * (1.0 + max_abs(a.iter().copied()));
    let zero: Vec<bool> = a.iter().map(|v| v.abs() <= a_thr).collect();
    let isolated = (0..n).all(|i| !(zero[i] && (i + 1 < n && zero[i + 1])));
    let axis_evolute = if !isolated || zero.iter().all(|&z| z) {
        diagnostics.push("a vanishes on an interval; no axis evolute".into());
        None
    } else {
        let mut z: Vec<Option<f64>> = (0..n)
            .map(|i| (!zero[i]).then(|| axis_value(&c.node(i))))
            .collect();
        let mut extensions = Vec::new();
        for i in 0..n {
            if zero[i] {
                let e = extend(ts[i], ts, &z, i.saturating_sub(1), (i + 1).min(n - 1));
                z[i] = e.value;
                extensions.push(e);
            } else if i + 1 < n && !zero[i + 1] && (a[i] < 0.0) != (a[i + 1] < 0.0) {
                let tz = bracket_zero(c, ts[i], ts[i + 1])?;
                extensions.push(extend(tz, ts, &z, i, i + 1));
            }
        }
        Some(AxisEvolute {
            t: ts.to_vec(),
            z,
            extensions,
        })
    };
    if profile_evolute.is_none() && axis_evolute.is_none() {
        diagnostics.push("neither evolute is defined on this grid".into());
    }
    Ok(RevolutionEvolutes {
        profile_evolute,
        axis_evolute,
        diagnostics,
    })
}

/// Largest distance between the parallel surface of the revolute and the
/// revolute of the parallel curve.
pub fn parallel_commutation_check(c: &LegendreCurve, lambda: f64, n_theta: usize) -> Result<f64> {
    let s = revolve(c, Axis::Z, n_theta)?;
    let p = s.surface.parallel(lambda);
    let q = revolve(&legendre::parallel_curve(c, lambda)?, Axis::Z, n_theta)?;
    Ok(p.nodes
        .iter()
        .zip(&q.surface.nodes)
        .map(|(a, b)| framed::norm(framed::sub(a.x.val, b.x.val)))
        .fold(0.0, f64::max))
}

impl fmt::Display for FlatClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FlatClass::Cone => "cone",
            FlatClass::Cylinder => "cylinder",
            FlatClass::Plane => "plane",
            FlatClass::Line => "line",
            FlatClass::Circle => "circle",
            FlatClass::Point => "point",
            FlatClass::NotFlat => "not_flat",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framed::{basic_invariants_of, curvature_of, integrability_residual};
    use crate::legendre::{ExprProfile, Grid};
    use approx::assert_relative_eq;

    fn curve(x: &str, z: &str, a: &str, b: &str, g: Grid) -> LegendreCurve {
        LegendreCurve::from_exprs(ExprProfile::parse(x, z, a, b).unwrap(), g).unwrap()
    }

    fn circle() -> LegendreCurve {
        curve("cos(t)", "sin(t)", "cos(t)", "sin(t)", Grid::uniform(-1.4, 1.4, 29).unwrap())
    }

    fn pseudo_sphere(n: usize) -> LegendreCurve {
        curve(
            "sin(t)",
            "cos(t) + log(tan(t/2))",
            "cos(t)",
            "-sin(t)",
            Grid::uniform(0.3, PI - 0.3, n).unwrap(),
        )
    }

    #[test]
    fn unit_sphere_invariants_and_curvature() {
        let s = revolve(&circle(), Axis::Z, 16).unwrap();
        let inv = basic_invariants_of(&s.surface).unwrap();
        for (i, (got, want)) in inv.values.iter().zip(&s.closed_form.values).enumerate() {
            for (g, w) in got.as_array().iter().zip(want.as_array()) {
                assert!((g - w).abs() < 1e-14, "node {i}: {got:?} vs {want:?}");
            }
        }
        let t = s.profile.grid().points()[3];
        let v = s.closed_form.values[3 * 16];
        assert_eq!((v.a1, v.b1, v.e1), (0.0, -1.0, 0.0));
        assert_relative_eq!(v.a2, -t.cos(), epsilon = 1e-15);
        assert_relative_eq!(v.f1, -1.0, epsilon = 1e-15);
        for rc in revolution_curvature(&s.profile, Axis::Z) {
            assert_relative_eq!(rc.j, -rc.t.cos(), epsilon = 1e-14);
            assert_relative_eq!(rc.k, -rc.t.cos(), epsilon = 1e-14);
            assert_relative_eq!(rc.h, rc.t.cos(), epsilon = 1e-14);
            assert_relative_eq!(rc.k / rc.j, 1.0, epsilon = 1e-12);
            assert_relative_eq!(rc.h / rc.j, -1.0, epsilon = 1e-12);
        }
        assert!(integrability_residual(&inv).unwrap().max < 1e-12);
    }

    #[test]
    fn pseudo_sphere_revolute() {
        let c = pseudo_sphere(41);
        for axis in [Axis::X, Axis::Z] {
            let s = revolve(&c, axis, 8).unwrap();
            let inv = basic_invariants_of(&s.surface).unwrap();
            for (got, want) in inv.values.iter().zip(&s.closed_form.values) {
                for (g, w) in got.as_array().iter().zip(want.as_array()) {
                    assert!((g - w).abs() < 1e-12);
                }
            }
            let cf = curvature_of(&inv);
            let closed = curvature_of(&s.closed_form);
            let rc = revolution_curvature(&c, axis);
            for i in 0..c.len() {
                let n = cf.nodes[i * 8 + 5];
                assert!((n.j - rc[i].j).abs() < 1e-12 && (n.k - rc[i].k).abs() < 1e-12);
                assert!((n.h - rc[i].h).abs() < 1e-12);
                for (e, w) in closed.nodes[i * 8].extras.iter().zip(rc[i].extras) {
                    assert!((e - w).abs() < 1e-14);
                }
            }
        }
        for rc in revolution_curvature(&c, Axis::Z) {
            assert_relative_eq!(rc.k / rc.j, -1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn cylinder_is_flat() {
        let c = curve("1", "t", "1", "0", Grid::uniform(0.0, 1.0, 9).unwrap());
        let rc = revolution_curvature(&c, Axis::Z);
        assert!(rc.iter().all(|r| r.k == 0.0));
        assert_eq!(flat_classification(&c, 1e-9), FlatClass::Cylinder);
    }

    #[test]
    fn flat_cases() {
        let g = Grid::uniform(0.5, 1.5, 9).unwrap();
        let h = FRAC_1_SQRT_2.to_string();
        let m = format!("-{h}");
        assert_eq!(flat_classification(&curve("t", "1", "0", "1", g.clone()), 1e-9), FlatClass::Plane);
        assert_eq!(flat_classification(&curve("t", "t", &h, &m, g.clone()), 1e-9), FlatClass::Cone);
        assert_eq!(flat_classification(&curve("0", "t", "1", "0", g.clone()), 1e-9), FlatClass::Line);
        assert_eq!(flat_classification(&curve("2", "1", "1", "0", g.clone()), 1e-9), FlatClass::Circle);
        assert_eq!(flat_classification(&curve("0", "1", "1", "0", g.clone()), 1e-9), FlatClass::Point);
        assert_eq!(flat_classification(&circle(), 1e-9), FlatClass::NotFlat);
    }

    #[test]
    fn xz_congruence() {
        let g = Grid::uniform(-1.0, 1.0, 11).unwrap();
        let h = FRAC_1_SQRT_2.to_string();
        let m = format!("-{h}");
        assert!(xz_congruence_check(&curve("t", "t", &h, &m, g.clone()), 1e-9));
        assert!(xz_congruence_check(&curve("t", "t", &m, &h, g.clone()), 1e-9));
        assert!(xz_congruence_check(&curve("t+3", "t+3", &h, &m, g.clone()), 1e-9));
        assert!(!xz_congruence_check(&circle(), 1e-9));
        // A shifted diagonal has different invariants (G^x carries z, G^z carries x).
        let c = curve("t+1", "t", &h, &m, g.clone());
        assert!(!xz_congruence_check(&c, 1e-9));
        let sx = curvature_of(&revolve(&c, Axis::X, 8).unwrap().closed_form);
        let sz = curvature_of(&revolve(&c, Axis::Z, 8).unwrap().closed_form);
        assert!((sx.nodes[0].j - sz.nodes[0].j).abs() > 0.1);
    }

    #[test]
    fn cone_type() {
        let g = Grid::uniform(-1.0, 1.0, 11).unwrap();
        let h = FRAC_1_SQRT_2.to_string();
        let m = format!("-{h}");
        let c = curve("t", "t", &h, &m, g.clone());
        assert!(cone_type_check(&c, 0.0, 1e-9).unwrap());
        assert_relative_eq!(c.jets_at(0.0, 1).unwrap().beta().value(), 2f64.sqrt(), epsilon = 1e-15);
        let ps = pseudo_sphere(21);
        assert!(ps
            .grid()
            .points()
            .iter()
            .all(|&t| !cone_type_check(&ps, t, 1e-9).unwrap()));
        let axis = curve("0", "t", "1", "0", g);
        assert!(!cone_type_check(&axis, 0.0, 1e-9).unwrap());
    }

    #[test]
    fn front_status() {
        let st = frontal_front_status(&pseudo_sphere(21), 1e-9);
        assert!(st.surface_frontal && st.surface_front && st.witnesses.is_empty());
        let st = frontal_front_status(&circle(), 1e-9);
        assert!(st.surface_front);
        // A fixed point with fixed normal: (ℓ, β) = (0, 0) everywhere.
        let p = curve("1", "1", "1", "0", Grid::uniform(0.0, 1.0, 3).unwrap());
        let st = frontal_front_status(&p, 1e-9);
        assert!(st.surface_frontal && !st.surface_front);
        assert_eq!(st.witnesses.len(), 3);
    }

    #[test]
    fn pseudo_sphere_evolutes() {
        let c = pseudo_sphere(40);
        let ev = revolution_evolutes(&c, 16).unwrap();
        let pe = ev.profile_evolute.expect("profile evolute");
        for (i, &t) in c.grid().points().iter().enumerate() {
            for (k, &th) in pe.theta.iter().enumerate() {
                let p = pe.point(i, k);
                let r = 1.0 / t.sin();
                assert!((p[0] - r * th.cos()).abs() < 1e-12);
                assert!((p[1] - r * th.sin()).abs() < 1e-12);
                assert!((p[2] - (t / 2.0).tan().ln()).abs() < 1e-12);
            }
        }
        let ax = ev.axis_evolute.expect("axis evolute");
        for (i, &t) in ax.t.iter().enumerate() {
            let want = (t / 2.0).tan().ln() + 1.0 / t.cos();
            assert!((ax.z[i].unwrap() - want).abs() < 1e-9 * (1.0 + want.abs()));
        }
        // The crossing at π/2 is found, but sec has a pole there.
        assert_eq!(ax.extensions.len(), 1);
        assert_relative_eq!(ax.extensions[0].t, PI / 2.0, epsilon = 1e-12);
        assert!(ax.extensions[0].value.is_none());
    }

    #[test]
    fn removable_zero_of_a_is_extended() {
        // a vanishes at 0 but z − x b / a = 2t³/3 + t + 1 is smooth.
        let c = curve(
            "t^2",
            "t^3*2/3 + 1",
            "t/sqrt(1+t^2)",
            "-1/sqrt(1+t^2)",
            Grid::uniform(-1.0, 1.0, 21).unwrap(),
        );
        assert!(legendre::verify_legendre(&c, 1e-12).pass);
        let ax = revolution_evolutes(&c, 8).unwrap().axis_evolute.unwrap();
        assert!(ax.continuous(), "{:?}", ax.extensions);
        assert!((ax.z[10].unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn circle_evolutes() {
        let ev = revolution_evolutes(&circle(), 8).unwrap();
        let pe = ev.profile_evolute.unwrap();
        assert!(pe.surface.nodes.iter().all(|n| framed::norm(n.x.val) < 1e-14));
        let ax = ev.axis_evolute.unwrap();
        for (i, &t) in ax.t.iter().enumerate() {
            let want = t.sin() - t.cos() * t.tan();
            assert!((ax.z[i].unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn line_profile_has_no_profile_evolute() {
        let c = curve("1", "t", "1", "0", Grid::uniform(0.0, 1.0, 9).unwrap());
        let ev = revolution_evolutes(&c, 8).unwrap();
        assert!(ev.profile_evolute.is_none());
        assert!(ev.axis_evolute.is_some());
        let c = curve("t", "1", "0", "1", Grid::uniform(0.0, 1.0, 9).unwrap());
        let ev = revolution_evolutes(&c, 8).unwrap();
        assert!(ev.profile_evolute.is_none() && ev.axis_evolute.is_none());
        assert!(!ev.diagnostics.is_empty());
    }

    #[test]
    fn commutation() {
        let c = pseudo_sphere(21);
        assert_eq!(parallel_commutation_check(&c, 0.0, 8).unwrap(), 0.0);
        assert!(parallel_commutation_check(&c, 0.5, 8).unwrap() <= 1e-10);
        assert!(parallel_commutation_check(&circle(), -1.0, 8).unwrap() <= 1e-10);
    }

    #[test]
    fn theta_count_validated() {
        assert!(revolve(&circle(), Axis::Z, 7).is_err());
    }
}
