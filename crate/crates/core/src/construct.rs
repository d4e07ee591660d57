//! Profile curves with prescribed curvature of their z-axis revolute.
//!
//! Every construction is a [`Profile`] whose node values come from quadrature
//! (or RK4 for the Gauss-ratio ODE) and whose jets come from local Taylor
//! recursion of the defining equations.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::jet::{Jet, Series};
use crate::legendre::{self, Grid, LegendreCurve, PointJets, Profile};
use crate::numdiff;
use crate::ode;
use crate::quad::{Antiderivative, ScalarFn};
use crate::revolution::{self, Axis};

/// Sign of `cos φ` chosen at `t₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s {
            "+" | "plus" | "1" | "+1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            _ => Err(Error::InvalidArgument(format!("branch must be + or -, got {s:?}"))),
        }
    }
}

/// `|sin φ|` within this of 1 counts as touching `±1`.
pub const FLIP_TOL: f64 = 1e-8;
/// `|sin φ|` beyond `1 + OVERSHOOT_TOL` is inconsistent data.
pub const OVERSHOOT_TOL: f64 = 1e-9;
/// Below this `|cos φ|` jets are taken by finite differences.
pub const SMALL_COS: f64 = 1e-6;
pub const FROBENIUS_ORDER: usize = 12;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FrobeniusInfo {
    /// Order of the zero of `β` at `t₀`.
    pub m: usize,
    pub delta: f64,
    pub coefficients: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub kind: String,
    pub t0: f64,
    /// Where `cos φ` changes sign.
    pub flips: Vec<f64>,
    pub frobenius: Option<FrobeniusInfo>,
    /// Numerical boundedness of `αβ²(t − t₀)²` near `t₀`; a heuristic, it
    /// cannot certify analyticity.
    pub analyticity_heuristic: Option<bool>,
    pub residuals: BTreeMap<String, f64>,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub curve: LegendreCurve,
    pub report: ConstructionReport,
}

fn check_anchor(grid: &Grid, t0: f64) -> Result<()> {
    if !(grid.min() <= t0 && t0 <= grid.max()) {
        return Err(Error::InvalidArgument(format!(
            "t0 = {t0} outside grid [{}, {}]",
            grid.min(),
            grid.max()
        )));
    }
    Ok(())
}

fn expr_fn(e: &Expr) -> ScalarFn {
    let e = e.clone();
    Arc::new(move |t| expr::eval(&e, t))
}

/// Sorted grid points with `t₀` merged in.
fn stops(grid: &Grid, t0: f64) -> Vec<f64> {
    let mut v = grid.points().to_vec();
    v.push(t0);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Sign pattern of `cos φ`: starts at the chosen branch and flips at each
/// point where `|sin φ|` touches 1.
#[derive(Clone, Debug)]
struct Branches {
    t0: f64,
    right: f64,
    left: f64,
    flips: Vec<f64>,
}

impl Branches {
    fn sign(&self, t: f64) -> f64 {
        if t >= self.t0 {
            let n = self.flips.iter().filter(|&&f| f > self.t0 && f <= t).count();
            if n % 2 == 0 {
                self.right
            } else {
                -self.right
            }
        } else {
            let n = self.flips.iter().filter(|&&f| f < self.t0 && f >= t).count();
            if n % 2 == 0 {
                self.left
            } else {
                -self.left
            }
        }
    }
}

/// Locate the points where `S = sin φ` touches `±1`. `sdot` is `Ṡ`.
fn find_branches(
    ts: &[f64],
    t0: f64,
    branch: Sign,
    s: &dyn Fn(f64) -> Result<f64>,
    sdot: &dyn Fn(f64) -> Result<f64>,
) -> Result<Branches> {
    let sv: Vec<f64> = ts.iter().map(|&t| s(t)).collect::<Result<_>>()?;
    let dv: Vec<f64> = ts.iter().map(|&t| sdot(t)).collect::<Result<_>>()?;
    for (i, v) in sv.iter().enumerate() {
        if v.abs() > 1.0 + OVERSHOOT_TOL {
            return Err(Error::Inconsistent {
                t: ts[i],
                reason: format!("|sin phi| = {} exceeds 1", v.abs()),
            });
        }
    }
    let s0 = s(t0)?;
    let at_pole = s0.abs() >= 1.0 - FLIP_TOL;
    let mut flips = Vec::new();
    let n = ts.len();
    for i in 0..n {
        // Exact stationary node with a sign change across it.
        if dv[i] == 0.0 && i > 0 && i + 1 < n && dv[i - 1] * dv[i + 1] < 0.0 {
            if sv[i].abs() >= 1.0 - FLIP_TOL && ts[i] != t0 {
                flips.push(ts[i]);
            }
            continue;
        }
        if i + 1 < n && dv[i] * dv[i + 1] < 0.0 {
            let (mut lo, mut hi, mut flo) = (ts[i], ts[i + 1], dv[i]);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                let fm = sdot(mid)?;
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            let tz = 0.5 * (lo + hi);
            let sz = s(tz)?;
            if sz.abs() > 1.0 + OVERSHOOT_TOL {
                return Err(Error::Inconsistent {
                    t: tz,
                    reason: format!("|sin phi| = {} exceeds 1", sz.abs()),
                });
            }
            if sz.abs() >= 1.0 - FLIP_TOL && !(at_pole && (tz - t0).abs() < 1e-12) {
                flips.push(tz);
            }
        }
    }
    flips.sort_by(f64::total_cmp);
    flips.dedup();
    let b = branch.value();
    Ok(Branches {
        t0,
        right: b,
        left: if at_pole { -b } else { b },
        flips,
    })
}

fn cos_from_sin(sign: f64, s: f64) -> f64 {
    sign * (1.0 - s * s).max(0.0).sqrt()
}

fn cos_series(sign: f64, s: &Series, t: f64) -> Result<Series> {
    let one_minus = s.mul(s).neg().add_const(1.0);
    Ok(one_minus.sqrt(t)?.scale(sign))
}

fn numeric_jet(f: &dyn Fn(f64) -> Result<f64>, t: f64, order: usize) -> Result<Jet> {
    Ok(Jet::from_derivatives(
        t,
        &numdiff::derivatives(f, t, 2e-3, order)?,
    ))
}

// ---------------------------------------------------------------------------
// Gauss ratio K = αJ.

#[derive(Clone, Debug, PartialEq)]
pub struct GaussRatioProblem {
    pub alpha: Expr,
    pub beta: Expr,
    pub t0: f64,
    pub x0: f64,
    /// `sin φ(t₀)`.
    pub s0: f64,
    pub z0: f64,
    pub branch: Sign,
}

struct Frobenius {
    t0: f64,
    delta: f64,
    x: Series,
    s: Series,
    info: FrobeniusInfo,
}

/// Series solution at a zero of `β` of order `m`: indicial roots `0` and
/// `m + 1`, fixed by `x(t₀)` and `sin φ(t₀)`.
fn frobenius(p: &GaussRatioProblem) -> Result<Option<Frobenius>> {
    let n = FROBENIUS_ORDER;
    let t0 = p.t0;
    let b = expr::eval_series(&p.beta, t0, n + 8)?;
    let bscale = b.coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let zero = 1e-10 * bscale.max(1.0);
    if b.value().abs() > zero {
        return Ok(None);
    }
    let m = match b.coeffs().iter().position(|v| v.abs() > zero) {
        Some(m) if m <= 5 => m,
        _ => {
            return Err(Error::Frobenius(format!(
                "beta vanishes to order > 5 at t0 = {t0}"
            )))
        }
    };
    let alpha = expr::eval_series(&p.alpha, t0, n)
        .map_err(|e| Error::Frobenius(format!("alpha not analytic at t0: {e}")))?;
    let bh = b.shift_down(m).truncate(n);
    // P(s) = -s β'/β = -m - s b̂'/b̂, Q(s) = s² α β² = s^(2m+2) α b̂².
    let ratio = bh.derivative().div_unchecked(&bh.truncate(n - 1));
    let mut pk = vec![0.0; n + 1];
    pk[0] = -(m as f64);
    for k in 1..=n {
        pk[k] = -ratio.coeff(k - 1);
    }
    let ab2 = alpha.mul(&bh).mul(&bh);
    let mut qk = vec![0.0; n + 1];
    for k in (2 * m + 2)..=n {
        qk[k] = ab2.coeff(k - 2 * m - 2);
    }
    let mut c = vec![0.0; n + 1];
    c[0] = p.x0;
    let scale = p.x0.abs().max(p.s0.abs()).max(1.0);
    for k in 1..=n {
        let rhs: f64 = -(1..=k)
            .map(|j| (pk[j] * (k - j) as f64 + qk[j]) * c[k - j])
            .sum::<f64>();
        let ind = (k * k) as f64 - ((m + 1) * k) as f64;
        if k == m + 1 {
            if rhs.abs() > 1e-9 * scale {
                return Err(Error::Frobenius(format!(
                    "resonant indicial root needs a logarithmic term (residual {rhs:e})"
                )));
            }
            c[k] = -bh.value() * p.s0 / (m + 1) as f64;
        } else {
            c[k] = rhs / ind;
        }
    }
    let x = Series::from_coeffs(c.clone());
    // S = -ẋ / β, computed with the common factor s^m removed.
    let xd = x.derivative();
    let s = xd.shift_down(m).div_unchecked(&bh.truncate(n - 1 - m)).neg();
    let tail = |series: &Series| -> f64 {
        let k = series.order();
        let tol = 1e-12 * scale;
        [k - 1, k]
            .iter()
            .map(|&j| {
                let v = series.coeff(j).abs();
                if v == 0.0 {
                    f64::INFINITY
                } else {
                    (tol / v).powf(1.0 / j as f64)
                }
            })
            .fold(f64::INFINITY, f64::min)
    };
    let delta = tail(&x).min(tail(&s)).min(0.25);
    Ok(Some(Frobenius {
        t0,
        delta,
        x,
        s,
        info: FrobeniusInfo {
            m,
            delta,
            coefficients: c,
        },
    }))
}

/// Integrated state of `ẋ = −β S`, `Ṡ = αβx` with `S = sin φ`.
struct GaussCore {
    alpha: Expr,
    beta: Expr,
    frob: Option<Frobenius>,
    ts: Vec<f64>,
    states: Vec<[f64; 2]>,
    step: f64,
    branches: Branches,
}

fn gauss_rhs<'a>(alpha: &'a Expr, beta: &'a Expr) -> impl Fn(f64, &[f64; 2]) -> Result<[f64; 2]> + 'a {
    move |t, y| {
        let b = expr::eval(beta, t)?;
        let a = expr::eval(alpha, t)?;
        Ok([-b * y[1], a * b * y[0]])
    }
}

impl GaussCore {
    fn series_state(f: &Frobenius, t: f64) -> [f64; 2] {
        [f.x.eval_offset(t - f.t0), f.s.eval_offset(t - f.t0)]
    }

    /// `(x, S)` anywhere: series near a singular `t₀`, else RK4 from the
    /// nearest stop with steps of at most a quarter grid spacing.
    fn state(&self, t: f64) -> Result<[f64; 2]> {
        if let Some(f) = self.frob.as_ref().filter(|f| (t - f.t0).abs() <= f.delta) {
            return Ok(Self::series_state(f, t));
        }
        let k = self.ts.partition_point(|&v| v < t);
        let i = if k == 0 {
            0
        } else if k == self.ts.len() || t - self.ts[k - 1] <= self.ts[k] - t {
            k - 1
        } else {
            k
        };
        // A stop inside the series disc hands over at the disc edge.
        let (from, y) = match self.frob.as_ref() {
            Some(f) if (self.ts[i] - f.t0).abs() <= f.delta => {
                let edge = f.t0 + f.delta.copysign(t - f.t0);
                (edge, Self::series_state(f, edge))
            }
            _ => (self.ts[i], self.states[i]),
        };
        if from == t {
            return Ok(y);
        }
        let steps = ((t - from).abs() / self.step).ceil().max(1.0) as usize;
        ode::rk4(&gauss_rhs(&self.alpha, &self.beta), from, y, t, steps)
    }

    fn cos_at(&self, t: f64) -> Result<f64> {
        Ok(cos_from_sin(self.branches.sign(t), self.state(t)?[1]))
    }

    fn new(p: &GaussRatioProblem, grid: &Grid) -> Result<Self> {
        check_anchor(grid, p.t0)?;
        if p.s0.abs() > 1.0 + OVERSHOOT_TOL {
            return Err(Error::InvalidArgument(format!("|sin phi(t0)| = {} > 1", p.s0.abs())));
        }
        let frob = frobenius(p)?;
        let ts = stops(grid, p.t0);
        let step = grid.max_step() / 4.0;
        let i0 = ts.partition_point(|&v| v < p.t0);
        let mut states = vec![[0.0; 2]; ts.len()];
        states[i0] = [p.x0, p.s0];
        let rhs = gauss_rhs(&p.alpha, &p.beta);
        let mut march = |range: Vec<usize>, dir: f64| -> Result<()> {
            let (mut tc, mut yc) = (p.t0, [p.x0, p.s0]);
            for i in range {
                let t = ts[i];
                if let Some(f) = frob.as_ref() {
                    if (t - f.t0).abs() <= f.delta {
                        states[i] = Self::series_state(f, t);
                        continue;
                    }
                    if (tc - f.t0).abs() < f.delta {
                        tc = f.t0 + dir * f.delta;
                        yc = Self::series_state(f, tc);
                    }
                }
                let steps = ((t - tc).abs() / step).ceil().max(1.0) as usize;
                yc = ode::rk4(&rhs, tc, yc, t, steps)?;
                tc = t;
                states[i] = yc;
            }
            Ok(())
        };
        march((i0 + 1..ts.len()).collect(), 1.0)?;
        march((0..i0).rev().collect(), -1.0)?;
        let mut core = GaussCore {
            alpha: p.alpha.clone(),
            beta: p.beta.clone(),
            frob,
            ts,
            states,
            step,
            branches: Branches {
                t0: p.t0,
                right: 1.0,
                left: 1.0,
                flips: Vec::new(),
            },
        };
        let s = |t: f64| Ok(core.state(t)?[1]);
        let sdot = |t: f64| {
            let y = core.state(t)?;
            Ok(expr::eval(&core.alpha, t)? * expr::eval(&core.beta, t)? * y[0])
        };
        let branches = find_branches(&core.ts, p.t0, p.branch, &s, &sdot)?;
        core.branches = branches;
        Ok(core)
    }
}

/// Gauss-ratio profile with `z = z₀ + ∫β cos φ`.
pub struct GaussProfile {
    core: Arc<GaussCore>,
    z: Antiderivative,
}

impl fmt::Debug for GaussProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GaussProfile(alpha = {}, beta = {})",
            self.core.alpha, self.core.beta
        )
    }
}

impl GaussProfile {
    pub fn new(p: &GaussRatioProblem, grid: &Grid) -> Result<Self> {
        let core = Arc::new(GaussCore::new(p, grid)?);
        let c = Arc::clone(&core);
        let zf: ScalarFn = Arc::new(move |t| Ok(expr::eval(&c.beta, t)? * c.cos_at(t)?));
        let z = Antiderivative::with_breakpoints(zf, p.t0, p.z0, grid.points(), &core.branches.flips)?;
        Ok(GaussProfile { core, z })
    }

    /// `(x, sin φ)` at `t`.
    pub fn state(&self, t: f64) -> Result<[f64; 2]> {
        self.core.state(t)
    }

    pub fn flips(&self) -> &[f64] {
        &self.core.branches.flips
    }

    pub fn frobenius_info(&self) -> Option<FrobeniusInfo> {
        self.core.frob.as_ref().map(|f| f.info.clone())
    }
}

/// Is `αβ²(t − t₀)²` bounded on a shrinking sequence around `t₀`?
fn analyticity_heuristic(p: &GaussRatioProblem) -> bool {
    let mut vals = Vec::new();
    for k in 1..=6 {
        let h = 10f64.powi(-k);
        for s in [h, -h] {
            match (expr::eval(&p.alpha, p.t0 + s), expr::eval(&p.beta, p.t0 + s)) {
                (Ok(a), Ok(b)) => vals.push(a * b * b * s * s),
                _ => return false,
            }
        }
    }
    vals.iter().all(|v| v.is_finite()) && vals.iter().fold(0.0f64, |m, v| m.max(v.abs())) < 1e6
}

impl Profile for GaussProfile {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets> {
        let core = &self.core;
        let [x0, s0] = core.state(t)?;
        let n = order;
        let a = expr::eval_series(&core.alpha, t, n)?;
        let b = expr::eval_series(&core.beta, t, n)?;
        let ab = a.mul(&b);
        let mut xc = vec![0.0; n + 1];
        let mut sc = vec![0.0; n + 1];
        xc[0] = x0;
        sc[0] = s0;
        for k in 0..n {
            let bs: f64 = (0..=k).map(|j| b.coeff(j) * sc[k - j]).sum();
            let abx: f64 = (0..=k).map(|j| ab.coeff(j) * xc[k - j]).sum();
            xc[k + 1] = -bs / (k + 1) as f64;
            sc[k + 1] = abx / (k + 1) as f64;
        }
        let xs = Series::from_coeffs(xc);
        let ss = Series::from_coeffs(sc);
        let sign = core.branches.sign(t);
        let c0 = cos_from_sin(sign, s0);
        let cs = if c0.abs() < SMALL_COS {
            numeric_jet(&|u| core.cos_at(u), t, n)?.series().clone()
        } else {
            cos_series(sign, &ss, t)?
        };
        let zs = b.mul(&cs).integral(self.z.eval(t)?).truncate(n);
        Ok(PointJets {
            x: Jet::from_series(t, xs),
            z: Jet::from_series(t, zs),
            a: Jet::from_series(t, cs),
            b: Jet::from_series(t, ss),
        })
    }
}

/// Profile whose z-revolute has `K = αJ`.
pub fn profile_from_gauss_ratio(p: &GaussRatioProblem, grid: &Grid) -> Result<Construction> {
    let g = Arc::new(GaussProfile::new(p, grid)?);
    let mut report = ConstructionReport {
        kind: "gauss".into(),
        t0: p.t0,
        flips: g.flips().to_vec(),
        frobenius: g.frobenius_info(),
        analyticity_heuristic: Some(analyticity_heuristic(p)),
        residuals: BTreeMap::new(),
    };
    let curve = LegendreCurve::sample(Arc::clone(&g) as Arc<dyn Profile>, grid.clone())?;
    let ode = gauss_ode_residual(&g, grid)?;
    report.residuals.insert("ode".into(), ode);
    report.residuals.insert(
        "ratio".into(),
        ratio_residual(&curve, &p.alpha, |rc| rc.k)?,
    );
    common_residuals(&curve, &mut report);
    Ok(Construction { curve, report })
}

/// `max |βẍ − β̇ẋ + αβ³x| / (1 + max |αβ³x|)` with derivatives of `x` by
/// finite differences of the integrated state.
fn gauss_ode_residual(g: &GaussProfile, grid: &Grid) -> Result<f64> {
    let h = (grid.max_step()).min(1e-2);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for &t in grid.points() {
        let d = numdiff::derivatives(&|u| Ok(g.state(u)?[0]), t, h, 2)?;
        let b = expr::eval_jet(&g.core.beta, t, 1)?;
        let a = expr::eval(&g.core.alpha, t)?;
        let bv = b.value();
        let src = a * bv * bv * bv * d[0];
        worst = worst.max((bv * d[2] - b.derivative(1) * d[1] + src).abs());
        scale = scale.max(src.abs());
    }
    Ok(worst / (1.0 + scale))
}

fn ratio_residual(
    curve: &LegendreCurve,
    alpha: &Expr,
    pick: impl Fn(&revolution::RevolutionCurvature) -> f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for rc in revolution::revolution_curvature(curve, Axis::Z) {
        let a = expr::eval(alpha, rc.t)?;
        worst = worst.max((pick(&rc) - a * rc.j).abs());
    }
    Ok(worst)
}

fn common_residuals(curve: &LegendreCurve, report: &mut ConstructionReport) {
    let lr = legendre::verify_legendre(curve, 0.0);
    report
        .residuals
        .insert("legendre_contact".into(), lr.max_contact_residual);
    report.residuals.insert("unit_normal".into(), lr.max_norm_residual);
}

// ---------------------------------------------------------------------------
// Prescribed (J, K).

#[derive(Clone, Debug, PartialEq)]
pub struct JkProblem {
    pub j: Expr,
    pub k: Expr,
    pub t0: f64,
    pub x0: f64,
    /// `sin φ(t₀)`, the constant of `−∫K`.
    pub s0: f64,
    pub z0: f64,
    pub branch: Sign,
}

struct JkCore {
    j: Expr,
    k: Expr,
    s: Antiderivative,
    x2: Antiderivative,
    branches: Branches,
}

fn positive_sqrt(v: f64, t: f64) -> Result<f64> {
    if !(v > 0.0) {
        return Err(Error::Inconsistent {
            t,
            reason: format!("radicand {v} is not positive"),
        });
    }
    Ok(v.sqrt())
}

impl JkCore {
    /// `(x, sin φ, cos φ)`.
    fn values(&self, t: f64) -> Result<(f64, f64, f64)> {
        let s = self.s.eval(t)?;
        let x = positive_sqrt(self.x2.eval(t)?, t)?;
        Ok((x, s, cos_from_sin(self.branches.sign(t), s)))
    }
}

pub struct JkProfile {
    core: Arc<JkCore>,
    z: Antiderivative,
}

impl fmt::Debug for JkProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JkProfile(J = {}, K = {})", self.core.j, self.core.k)
    }
}

impl Profile for JkProfile {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets> {
        let core = &self.core;
        let n = order;
        let (x0, s0, c0) = core.values(t)?;
        let lo = n.saturating_sub(1);
        let jj = expr::eval_series(&core.j, t, lo)?;
        let kk = expr::eval_series(&core.k, t, lo)?;
        let s = kk.neg().integral(s0).truncate(n);
        let x2 = jj.mul(&s).scale(2.0).integral(x0 * x0).truncate(n);
        let x = x2.sqrt(t)?;
        let sign = core.branches.sign(t);
        let c = if c0.abs() < SMALL_COS {
            numeric_jet(&|u| Ok(core.values(u)?.2), t, n)?.series().clone()
        } else {
            cos_series(sign, &s, t)?
        };
        let jn = expr::eval_series(&core.j, t, n)?;
        let beta = jn.div_checked(&x, "division", t)?.neg();
        let z = beta.mul(&c).integral(self.z.eval(t)?).truncate(n);
        Ok(PointJets {
            x: Jet::from_series(t, x),
            z: Jet::from_series(t, z),
            a: Jet::from_series(t, c),
            b: Jet::from_series(t, s),
        })
    }
}

/// `sin φ = s₀ − ∫K`, `x² = x₀² + 2∫J sin φ`, `z = −∫(J/x) cos φ`.
pub fn profile_from_jk(p: &JkProblem, grid: &Grid) -> Result<Construction> {
    check_anchor(grid, p.t0)?;
    if !(p.x0 > 0.0) {
        return Err(Error::InvalidArgument("x(t0) must be positive".into()));
    }
    let kf = expr_fn(&p.k);
    let s = Antiderivative::new(Arc::new(move |t| Ok(-kf(t)?)), p.t0, p.s0, grid.points())?;
    let (jf, s1) = (expr_fn(&p.j), s.clone());
    let x2 = Antiderivative::new(
        Arc::new(move |t| Ok(2.0 * jf(t)? * s1.eval(t)?)),
        p.t0,
        p.x0 * p.x0,
        grid.points(),
    )?;
    for (t, v) in x2.nodes().iter().zip(x2.node_values()) {
        positive_sqrt(*v, *t)?;
    }
    let ts = stops(grid, p.t0);
    let kf = expr_fn(&p.k);
    let branches = find_branches(&ts, p.t0, p.branch, &|t| s.eval(t), &|t| Ok(-kf(t)?))?;
    let core = Arc::new(JkCore {
        j: p.j.clone(),
        k: p.k.clone(),
        s,
        x2,
        branches,
    });
    let flips = core.branches.flips.clone();
    let (c, jf) = (Arc::clone(&core), expr_fn(&p.j));
    let zf: ScalarFn = Arc::new(move |t| {
        let (x, _, cos) = c.values(t)?;
        Ok(-jf(t)? / x * cos)
    });
    let z = Antiderivative::with_breakpoints(zf, p.t0, p.z0, grid.points(), &flips)?;
    let curve = LegendreCurve::sample(Arc::new(JkProfile { core, z }), grid.clone())?;
    let mut report = ConstructionReport {
        kind: "gauss-jk".into(),
        t0: p.t0,
        flips,
        ..Default::default()
    };
    let (mut rj, mut rk) = (0.0f64, 0.0f64);
    for r in revolution::revolution_curvature(&curve, Axis::Z) {
        rj = rj.max((r.j - expr::eval(&p.j, r.t)?).abs());
        rk = rk.max((r.k - expr::eval(&p.k, r.t)?).abs());
    }
    report.residuals.insert("J".into(), rj);
    report.residuals.insert("K".into(), rk);
    common_residuals(&curve, &mut report);
    Ok(Construction { curve, report })
}

// ---------------------------------------------------------------------------
// Mean ratio H = αJ.

#[derive(Clone, Debug, PartialEq)]
pub struct MeanRatioProblem {
    pub alpha: Expr,
    pub beta: Expr,
    /// `F(t₀)`.
    pub c1: f64,
    /// `G(t₀)`.
    pub c2: f64,
    pub t0: f64,
    pub z0: f64,
}

pub struct MeanProfile {
    alpha: Expr,
    beta: Expr,
    eta: Arc<Antiderivative>,
    f: Antiderivative,
    g: Antiderivative,
    z: Antiderivative,
}

impl fmt::Debug for MeanProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeanProfile(alpha = {}, beta = {})", self.alpha, self.beta)
    }
}

struct MeanValues {
    eta: f64,
    f: f64,
    g: f64,
}

impl MeanValues {
    fn x(&self) -> f64 {
        self.f.hypot(self.g)
    }

    /// `x cos φ = F sin η − G cos η`.
    fn xc(&self) -> f64 {
        self.f * self.eta.sin() - self.g * self.eta.cos()
    }

}

fn mean_values(eta: &Antiderivative, f: &Antiderivative, g: &Antiderivative, t: f64) -> Result<MeanValues> {
    let v = MeanValues {
        eta: eta.eval(t)?,
        f: f.eval(t)?,
        g: g.eval(t)?,
    };
    if !(v.x() > 1e-12) {
        return Err(Error::Inconsistent {
            t,
            reason: "x = sqrt(F^2 + G^2) vanishes".into(),
        });
    }
    Ok(v)
}

impl MeanProfile {
    fn values(&self, t: f64) -> Result<MeanValues> {
        mean_values(&self.eta, &self.f, &self.g, t)
    }

    /// `X = (F sin η − G cos η)/(F² + G²) + 2α`; the curvature is `(−βX, β)`.
    pub fn big_x(&self, t: f64) -> Result<f64> {
        let v = self.values(t)?;
        Ok(v.xc() / (v.f * v.f + v.g * v.g) + 2.0 * expr::eval(&self.alpha, t)?)
    }

    pub fn expected_curvature(&self, t: f64) -> Result<(f64, f64)> {
        let b = expr::eval(&self.beta, t)?;
        Ok((-b * self.big_x(t)?, b))
    }
}

impl Profile for MeanProfile {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets> {
        let n = order;
        let v = self.values(t)?;
        let lo = n.saturating_sub(1);
        let a = expr::eval_series(&self.alpha, t, lo)?;
        let b = expr::eval_series(&self.beta, t, lo)?;
        let eta = a.mul(&b).scale(2.0).integral(v.eta).truncate(n);
        let (se, ce) = eta.sin_cos();
        let (se_lo, ce_lo) = (se.truncate(lo), ce.truncate(lo));
        let f = b.mul(&ce_lo).neg().integral(v.f).truncate(n);
        let g = b.mul(&se_lo).neg().integral(v.g).truncate(n);
        let x = f.mul(&f).add(&g.mul(&g)).sqrt(t)?;
        let xc = f.mul(&se).sub(&g.mul(&ce));
        let xs = f.mul(&ce).add(&g.mul(&se));
        let c = xc.div_checked(&x, "division", t)?;
        let s = xs.div_checked(&x, "division", t)?;
        let bn = expr::eval_series(&self.beta, t, n)?;
        let z = bn.mul(&c).integral(self.z.eval(t)?).truncate(n);
        Ok(PointJets {
            x: Jet::from_series(t, x),
            z: Jet::from_series(t, z),
            a: Jet::from_series(t, c),
            b: Jet::from_series(t, s),
        })
    }
}

/// `η = 2∫αβ`, `F = c₁ − ∫β cos η`, `G = c₂ − ∫β sin η`, `x = √(F² + G²)`.
pub fn mean_profile(p: &MeanRatioProblem, grid: &Grid) -> Result<MeanProfile> {
    check_anchor(grid, p.t0)?;
    let (af, bf) = (expr_fn(&p.alpha), expr_fn(&p.beta));
    let eta = Arc::new(Antiderivative::new(
        Arc::new(move |t| Ok(2.0 * af(t)? * bf(t)?)),
        p.t0,
        0.0,
        grid.points(),
    )?);
    let trig = |use_sin: bool| -> ScalarFn {
        let (e, bf) = (Arc::clone(&eta), expr_fn(&p.beta));
        Arc::new(move |t| {
            let h = e.eval(t)?;
            Ok(-bf(t)? * if use_sin { h.sin() } else { h.cos() })
        })
    };
    let f = Antiderivative::new(trig(false), p.t0, p.c1, grid.points())?;
    let g = Antiderivative::new(trig(true), p.t0, p.c2, grid.points())?;
    for &t in grid.points() {
        mean_values(&eta, &f, &g, t)?;
    }
    let (e2, f2, g2, bf) = (Arc::clone(&eta), f.clone(), g.clone(), expr_fn(&p.beta));
    let zf: ScalarFn = Arc::new(move |t| {
        let v = mean_values(&e2, &f2, &g2, t)?;
        Ok(bf(t)? * v.xc() / v.x())
    });
    let z = Antiderivative::new(zf, p.t0, p.z0, grid.points())?;
    Ok(MeanProfile {
        alpha: p.alpha.clone(),
        beta: p.beta.clone(),
        eta,
        f,
        g,
        z,
    })
}

pub fn profile_from_mean_ratio(p: &MeanRatioProblem, grid: &Grid) -> Result<Construction> {
    let prof = Arc::new(mean_profile(p, grid)?);
    let curve = LegendreCurve::sample(Arc::clone(&prof) as Arc<dyn Profile>, grid.clone())?;
    let mut report = ConstructionReport {
        kind: "mean".into(),
        t0: p.t0,
        ..Default::default()
    };
    report.residuals.insert(
        "ratio".into(),
        ratio_residual(&curve, &p.alpha, |rc| rc.h)?,
    );
    let mut ident = 0.0f64;
    for (i, &t) in grid.points().iter().enumerate() {
        let (ell, beta) = prof.expected_curvature(t)?;
        ident = ident
            .max((curve.curvature.ell[i].value() - ell).abs())
            .max((curve.curvature.beta[i].value() - beta).abs());
    }
    report.residuals.insert("curvature_identity".into(), ident);
    common_residuals(&curve, &mut report);
    Ok(Construction { curve, report })
}

// ---------------------------------------------------------------------------
// Prescribed J with φ, and prescribed H with φ.

#[derive(Clone, Debug, PartialEq)]
pub struct JPhiProblem {
    pub j: Expr,
    pub phi: Expr,
    pub t0: f64,
    pub x0: f64,
    pub z0: f64,
}

pub struct JPhiProfile {
    j: Expr,
    phi: Expr,
    x2: Arc<Antiderivative>,
    z: Antiderivative,
}

impl fmt::Debug for JPhiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "JPhiProfile(J = {}, phi = {})", self.j, self.phi)
    }
}

impl Profile for JPhiProfile {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets> {
        let n = order;
        let lo = n.saturating_sub(1);
        let x0 = positive_sqrt(self.x2.eval(t)?, t)?;
        let phi = expr::eval_series(&self.phi, t, n)?;
        let (s, c) = phi.sin_cos();
        let j = expr::eval_series(&self.j, t, n)?;
        let x = j
            .truncate(lo)
            .mul(&s.truncate(lo))
            .scale(2.0)
            .integral(x0 * x0)
            .truncate(n)
            .sqrt(t)?;
        let beta = j.div_checked(&x, "division", t)?.neg();
        let z = beta.mul(&c).integral(self.z.eval(t)?).truncate(n);
        Ok(PointJets {
            x: Jet::from_series(t, x),
            z: Jet::from_series(t, z),
            a: Jet::from_series(t, c),
            b: Jet::from_series(t, s),
        })
    }

    fn phi(&self, t: f64, order: usize) -> Option<Result<Jet>> {
        Some(expr::eval_jet(&self.phi, t, order))
    }
}

/// `x² = x₀² + 2∫J sin φ`, `z = −∫(J/x) cos φ`, `β = −J/x`.
pub fn profile_from_j_phi(p: &JPhiProblem, grid: &Grid) -> Result<Construction> {
    check_anchor(grid, p.t0)?;
    if !(p.x0 > 0.0) {
        return Err(Error::InvalidArgument("x(t0) must be positive".into()));
    }
    let (jf, pf) = (expr_fn(&p.j), expr_fn(&p.phi));
    let x2 = Arc::new(Antiderivative::new(
        Arc::new(move |t| Ok(2.0 * jf(t)? * pf(t)?.sin())),
        p.t0,
        p.x0 * p.x0,
        grid.points(),
    )?);
    for (t, v) in x2.nodes().iter().zip(x2.node_values()) {
        positive_sqrt(*v, *t)?;
    }
    let (jf, pf, xx) = (expr_fn(&p.j), expr_fn(&p.phi), Arc::clone(&x2));
    let zf: ScalarFn = Arc::new(move |t| {
        let x = positive_sqrt(xx.eval(t)?, t)?;
        Ok(-jf(t)? / x * pf(t)?.cos())
    });
    let z = Antiderivative::new(zf, p.t0, p.z0, grid.points())?;
    let prof = JPhiProfile {
        j: p.j.clone(),
        phi: p.phi.clone(),
        x2,
        z,
    };
    let curve = LegendreCurve::sample(Arc::new(prof), grid.clone())?;
    let mut report = ConstructionReport {
        kind: "j-phi".into(),
        t0: p.t0,
        ..Default::default()
    };
    let mut rj = 0.0f64;
    for r in revolution::revolution_curvature(&curve, Axis::Z) {
        rj = rj.max((r.j - expr::eval(&p.j, r.t)?).abs());
    }
    report.residuals.insert("J".into(), rj);
    common_residuals(&curve, &mut report);
    Ok(Construction { curve, report })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HPhiProblem {
    pub h: Expr,
    pub phi: Expr,
    pub t0: f64,
    /// `x(t₀)`.
    pub x0: f64,
    pub z0: f64,
}

pub struct HPhiProfile {
    h: Expr,
    phi: Expr,
    /// `x cos φ`.
    xc: Arc<Antiderivative>,
    z: Antiderivative,
}

impl fmt::Debug for HPhiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPhiProfile(H = {}, phi = {})", self.h, self.phi)
    }
}

impl Profile for HPhiProfile {
    fn jets(&self, t: f64, order: usize) -> Result<PointJets> {
        let n = order;
        let lo = n.saturating_sub(1);
        let phi = expr::eval_series(&self.phi, t, n)?;
        let (s, c) = phi.sin_cos();
        let h = expr::eval_series(&self.h, t, n)?;
        let xc = h
            .truncate(lo)
            .mul(&s.truncate(lo))
            .scale(-2.0)
            .integral(self.xc.eval(t)?)
            .truncate(n);
        let x = xc.div_checked(&c, "division", t)?;
        let zd = h.scale(2.0).sub(&phi.derivative().mul(&x));
        let z = zd.integral(self.z.eval(t)?).truncate(n);
        Ok(PointJets {
            x: Jet::from_series(t, x),
            z: Jet::from_series(t, z),
            a: Jet::from_series(t, c),
            b: Jet::from_series(t, s),
        })
    }

    fn phi(&self, t: f64, order: usize) -> Option<Result<Jet>> {
        Some(expr::eval_jet(&self.phi, t, order))
    }
}

/// `x = (x₀ cos φ(t₀) − ∫2H sin φ)/cos φ`, `z = ∫(2H − φ̇x)`.
pub fn profile_from_h_phi(p: &HPhiProblem, grid: &Grid) -> Result<Construction> {
    check_anchor(grid, p.t0)?;
    let cos_tol = 1e-8;
    for &t in grid.points() {
        if expr::eval(&p.phi, t)?.cos().abs() <= cos_tol {
            return Err(Error::Hypothesis(format!("cos phi vanishes at t = {t}")));
        }
    }
    let c0 = expr::eval(&p.phi, p.t0)?.cos();
    let (hf, pf) = (expr_fn(&p.h), expr_fn(&p.phi));
    let xc = Arc::new(Antiderivative::new(
        Arc::new(move |t| Ok(-2.0 * hf(t)? * pf(t)?.sin())),
        p.t0,
        p.x0 * c0,
        grid.points(),
    )?);
    let (hf, phi, xx) = (expr_fn(&p.h), p.phi.clone(), Arc::clone(&xc));
    let zf: ScalarFn = Arc::new(move |t| {
        let j = expr::eval_jet(&phi, t, 1)?;
        let x = xx.eval(t)? / j.value().cos();
        Ok(2.0 * hf(t)? - j.derivative(1) * x)
    });
    let z = Antiderivative::new(zf, p.t0, p.z0, grid.points())?;
    let prof = HPhiProfile {
        h: p.h.clone(),
        phi: p.phi.clone(),
        xc,
        z,
    };
    let curve = LegendreCurve::sample(Arc::new(prof), grid.clone())?;
    let mut report = ConstructionReport {
        kind: "h-phi".into(),
        t0: p.t0,
        ..Default::default()
    };
    let mut rh = 0.0f64;
    for r in revolution::revolution_curvature(&curve, Axis::Z) {
        rh = rh.max((r.h - expr::eval(&p.h, r.t)?).abs());
    }
    report.residuals.insert("H".into(), rh);
    common_residuals(&curve, &mut report);
    Ok(Construction { curve, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::{congruence_align, ExprProfile};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn e(s: &str) -> Expr {
        expr::parse(s).unwrap()
    }

    fn pseudo_sphere_problem() -> GaussRatioProblem {
        GaussRatioProblem {
            alpha: e("-1"),
            beta: e("cot(t)"),
            t0: PI / 2.0,
            x0: 1.0,
            s0: -1.0,
            z0: 0.0,
            branch: Sign::Minus,
        }
    }

    #[test]
    fn pseudo_sphere_from_gauss_ratio() {
        let grid = Grid::uniform(0.2, PI - 0.2, 120).unwrap();
        let c = profile_from_gauss_ratio(&pseudo_sphere_problem(), &grid).unwrap();
        let f = c.report.frobenius.as_ref().expect("beta vanishes at t0");
        assert_eq!(f.m, 1);
        assert_eq!(c.report.flips, Vec::<f64>::new());
        for (i, &t) in grid.points().iter().enumerate() {
            assert!((c.curve.point(i)[0] - t.sin()).abs() < 1e-9, "x at {t}");
            let z = t.cos() + (t / 2.0).tan().ln();
            assert!((c.curve.point(i)[1] - z).abs() < 1e-8, "z at {t}");
            assert!((c.curve.normal_at(i)[0] - t.cos()).abs() < 1e-9);
        }
        assert!(c.report.residuals["ode"] < 1e-7, "{:?}", c.report.residuals);
        assert!(c.report.residuals["ratio"] < 1e-6, "{:?}", c.report.residuals);
        assert!(c.report.analyticity_heuristic.unwrap());
    }

    #[test]
    fn pseudo_sphere_jets_at_cusp() {
        let grid = Grid::uniform(0.2, PI - 0.2, 121).unwrap();
        let c = profile_from_gauss_ratio(&pseudo_sphere_problem(), &grid).unwrap();
        let p = c.curve.jets_at(PI / 2.0, 5).unwrap();
        assert!(p.beta().value().abs() < 1e-10);
        assert!((p.beta().derivative(1) + 1.0).abs() < 1e-6);
        assert!((p.ell().value() + 1.0).abs() < 1e-6);
    }

    #[test]
    fn harmonic_reduction() {
        let p = GaussRatioProblem {
            alpha: e("1"),
            beta: e("1"),
            t0: 0.0,
            x0: 1.0,
            s0: 0.0,
            z0: 0.0,
            branch: Sign::Plus,
        };
        let grid = Grid::uniform(-1.0, 1.2, 45).unwrap();
        let c = profile_from_gauss_ratio(&p, &grid).unwrap();
        assert!(c.report.frobenius.is_none());
        for (i, &t) in grid.points().iter().enumerate() {
            assert!((c.curve.point(i)[0] - t.cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn alpha_zero_gives_linear_x() {
        let p = GaussRatioProblem {
            alpha: e("0"),
            beta: e("1"),
            t0: 0.0,
            x0: 1.0,
            s0: -0.5,
            z0: 0.0,
            branch: Sign::Plus,
        };
        let grid = Grid::uniform(0.0, 2.0, 21).unwrap();
        let c = profile_from_gauss_ratio(&p, &grid).unwrap();
        for (i, &t) in grid.points().iter().enumerate() {
            assert!((c.curve.point(i)[0] - (1.0 + 0.5 * t)).abs() < 1e-12);
            assert!(c.curve.curvature.ell[i].value().abs() < 1e-12);
        }
    }

    #[test]
    fn sin_phi_out_of_range_is_inconsistent() {
        let p = GaussRatioProblem {
            alpha: e("1"),
            beta: e("1"),
            t0: 0.0,
            x0: 5.0,
            s0: 0.0,
            z0: 0.0,
            branch: Sign::Plus,
        };
        let grid = Grid::uniform(0.0, 1.0, 21).unwrap();
        assert!(matches!(
            profile_from_gauss_ratio(&p, &grid),
            Err(Error::Inconsistent { .. })
        ));
    }

    #[test]
    fn branch_flips_on_the_sphere() {
        // α = 1, β = 1 with x0 = 1, S0 = 0 is the unit circle x = cos t, S = sin t;
        // |S| touches 1 at ±π/2 and cos φ must change sign there.
        let p = GaussRatioProblem {
            alpha: e("1"),
            beta: e("1"),
            t0: 0.0,
            x0: 1.0,
            s0: 0.0,
            z0: 0.0,
            branch: Sign::Plus,
        };
        let grid = Grid::uniform(-2.5, 2.5, 101).unwrap();
        let c = profile_from_gauss_ratio(&p, &grid).unwrap();
        assert_eq!(c.report.flips.len(), 2);
        assert_relative_eq!(c.report.flips[0], -PI / 2.0, epsilon = 1e-6);
        assert_relative_eq!(c.report.flips[1], PI / 2.0, epsilon = 1e-6);
        for (i, &t) in grid.points().iter().enumerate() {
            let [a, b] = c.curve.normal_at(i);
            assert!((a - t.cos()).abs() < 1e-6 && (b - t.sin()).abs() < 1e-9, "at {t}");
            assert!((c.curve.point(i)[1] - t.sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn jk_recovers_circle() {
        let p = JkProblem {
            j: e("-cos(t)"),
            k: e("-cos(t)"),
            t0: PI / 4.0,
            x0: (PI / 4.0).cos(),
            s0: (PI / 4.0).sin(),
            z0: (PI / 4.0).sin(),
            branch: Sign::Plus,
        };
        let grid = Grid::uniform(-1.2, 1.2, 49).unwrap();
        let c = profile_from_jk(&p, &grid).unwrap();
        let reference = LegendreCurve::from_exprs(
            ExprProfile::parse("cos(t)", "sin(t)", "cos(t)", "sin(t)").unwrap(),
            grid,
        )
        .unwrap();
        assert!(congruence_align(&c.curve, &reference).unwrap().residual < 1e-8);
        assert!(c.report.residuals["J"] < 1e-6 && c.report.residuals["K"] < 1e-6);
    }

    #[test]
    fn jk_flat_and_degenerate() {
        let grid = Grid::uniform(0.0, 1.0, 21).unwrap();
        let p = JkProblem {
            j: e("-1"),
            k: e("0"),
            t0: 0.0,
            x0: 2.0,
            s0: 0.0,
            z0: 0.0,
            branch: Sign::Plus,
        };
        let c = profile_from_jk(&p, &grid).unwrap();
        for (i, &t) in grid.points().iter().enumerate() {
            assert_relative_eq!(c.curve.point(i)[0], 2.0, epsilon = 1e-12);
            assert_relative_eq!(c.curve.point(i)[1], t / 2.0, epsilon = 1e-12);
        }
        assert_eq!(
            revolution::flat_classification(&c.curve, 1e-9),
            revolution::FlatClass::Cylinder
        );
        let p = JkProblem { j: e("0"), ..p };
        let c = profile_from_jk(&p, &grid).unwrap();
        assert!(c.curve.curvature.beta.iter().all(|b| b.value() == 0.0));
        assert!(c.curve.curve.z.iter().all(|z| z.value() == 0.0));
    }

    #[test]
    fn jk_radicand_error() {
        let p = JkProblem {
            j: e("1"),
            k: e("-1"),
            t0: 0.0,
            x0: 0.1,
            s0: 0.0,
            z0: 0.0,
            branch: Sign::Plus,
        };
        // x² = 0.01 + t², fine on the right; S = t exceeds 1 past t = 1.
        assert!(profile_from_jk(&p, &Grid::uniform(0.0, 1.5, 16).unwrap()).is_err());
        let p = JkProblem { j: e("-1"), k: e("-1"), ..p };
        // x² = 0.01 − t² turns negative.
        assert!(matches!(
            profile_from_jk(&p, &Grid::uniform(0.0, 0.5, 16).unwrap()),
            Err(Error::Inconsistent { .. })
        ));
    }

    #[test]
    fn catenoid_with_singularity() {
        let p = MeanRatioProblem {
            alpha: e("0"),
            beta: e("t"),
            c1: 0.2,
            c2: 0.3,
            t0: 0.0,
            z0: 0.0,
        };
        let grid = Grid::uniform(-1.5, 1.5, 61).unwrap();
        let c = profile_from_mean_ratio(&p, &grid).unwrap();
        for (i, &t) in grid.points().iter().enumerate() {
            let want = (0.09f64 + (0.2 - t * t / 2.0).powi(2)).sqrt();
            assert!((c.curve.point(i)[0] - want).abs() < 1e-12);
        }
        assert!(c.report.residuals["ratio"] < 1e-10);
        assert!(c.report.residuals["curvature_identity"] < 1e-10);
    }

    #[test]
    fn unduloid_ratio() {
        for c2 in [0.3, 0.75] {
            let p = MeanRatioProblem {
                alpha: e("-1/2"),
                beta: e("t"),
                c1: 0.2,
                c2,
                t0: 0.0,
                z0: 0.0,
            };
            let grid = Grid::uniform(-2.0, 2.0, 81).unwrap();
            let c = profile_from_mean_ratio(&p, &grid).unwrap();
            for (i, &t) in grid.points().iter().enumerate() {
                let f = 0.2 - (t * t / 2.0).sin();
                let g = c2 + 1.0 - (t * t / 2.0).cos();
                assert!((c.curve.point(i)[0] - f.hypot(g)).abs() < 1e-10);
            }
            assert!(c.report.residuals["ratio"] < 1e-9);
        }
    }

    #[test]
    fn mean_point_profile() {
        let p = MeanRatioProblem {
            alpha: e("0"),
            beta: e("0"),
            c1: 0.6,
            c2: 0.8,
            t0: 0.0,
            z0: 0.0,
        };
        let c = profile_from_mean_ratio(&p, &Grid::uniform(0.0, 1.0, 11).unwrap()).unwrap();
        assert!(c.curve.curve.x.iter().all(|x| (x.value() - 1.0).abs() < 1e-15));
        assert!(c.curve.curve.z.iter().all(|z| z.value() == 0.0));
    }

    #[test]
    fn j_phi_circle() {
        let p = JPhiProblem {
            j: e("-cos(t)"),
            phi: e("t"),
            t0: PI / 4.0,
            x0: (PI / 4.0).cos(),
            z0: 0.0,
        };
        let grid = Grid::uniform(-1.0, 1.3, 47).unwrap();
        let c = profile_from_j_phi(&p, &grid).unwrap();
        for (i, &t) in grid.points().iter().enumerate() {
            assert!((c.curve.point(i)[0] - t.cos()).abs() < 1e-10);
        }
        assert!(c.report.residuals["J"] < 1e-9);
        let p = JPhiProblem {
            j: e("-t"),
            phi: e("pi/2"),
            t0: 0.0,
            x0: 1.0,
            z0: 0.0,
        };
        let c = profile_from_j_phi(&p, &Grid::uniform(0.0, 0.9, 10).unwrap()).unwrap();
        for (i, &t) in c.curve.grid().points().iter().enumerate() {
            assert!((c.curve.point(i)[0] - (1.0 - t * t).sqrt()).abs() < 1e-10);
            assert!(c.curve.point(i)[1].abs() < 1e-12);
        }
        assert!(c.report.residuals["J"] < 1e-9);
    }

    #[test]
    fn h_phi_cases() {
        let p = HPhiProblem {
            h: e("1/2"),
            phi: e("0"),
            t0: 0.0,
            x0: 2.0,
            z0: 0.0,
        };
        let grid = Grid::uniform(0.0, 1.0, 11).unwrap();
        let c = profile_from_h_phi(&p, &grid).unwrap();
        for (i, &t) in grid.points().iter().enumerate() {
            assert_relative_eq!(c.curve.point(i)[0], 2.0);
            assert_relative_eq!(c.curve.point(i)[1], t, epsilon = 1e-13);
            assert_relative_eq!(c.curve.curvature.beta[i].value(), 1.0);
        }
        assert!(c.report.residuals["H"] < 1e-12);
        let flat = HPhiProblem { h: e("0"), ..p.clone() };
        let c = profile_from_h_phi(&flat, &grid).unwrap();
        assert!(c.curve.curvature.beta.iter().all(|b| b.value() == 0.0));
        let bad = HPhiProblem { phi: e("pi/2"), ..p.clone() };
        assert!(matches!(profile_from_h_phi(&bad, &grid), Err(Error::Hypothesis(_))));
        let wavy = HPhiProblem {
            h: e("cos(t)"),
            phi: e("t/3"),
            ..p
        };
        let c = profile_from_h_phi(&wavy, &grid).unwrap();
        assert!(c.report.residuals["H"] < 1e-9, "{:?}", c.report.residuals);
    }

    #[test]
    fn anchor_must_lie_on_grid() {
        let mut p = pseudo_sphere_problem();
        p.t0 = 5.0;
        assert!(profile_from_gauss_ratio(&p, &Grid::uniform(0.2, 1.0, 10).unwrap()).is_err());
    }
}
