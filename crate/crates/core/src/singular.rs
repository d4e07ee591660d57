//! Orders of zeros, j/i-cusp criteria and singularity labels for profiles
//! and their surfaces of revolution.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::legendre::{LegendreCurve, PointJets};
use crate::revolution;

/// Default zero-test tolerance for jets from exact arithmetic.
pub const EXACT_TOL: f64 = 1e-8;
/// Default zero-test tolerance for jets from finite differences.
pub const SAMPLED_TOL: f64 = 1e-4;

pub fn default_tol(c: &LegendreCurve) -> f64 {
    if c.exact() {
        EXACT_TOL
    } else {
        SAMPLED_TOL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Label {
    #[serde(rename = "regular")]
    Regular,
    #[serde(rename = "cusp_3_2")]
    Cusp32,
    #[serde(rename = "cusp_5_2")]
    Cusp52,
    #[serde(rename = "cusp_4_3")]
    Cusp43,
    #[serde(rename = "cusp_5_3")]
    Cusp53,
    #[serde(rename = "cone_type")]
    ConeType,
    #[serde(rename = "axis_degenerate")]
    AxisDegenerate,
    #[serde(rename = "unresolved")]
    Unresolved,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Regular => "regular",
            Label::Cusp32 => "cusp_3_2",
            Label::Cusp52 => "cusp_5_2",
            Label::Cusp43 => "cusp_4_3",
            Label::Cusp53 => "cusp_5_3",
            Label::ConeType => "cone_type",
            Label::AxisDegenerate => "axis_degenerate",
            Label::Unresolved => "unresolved",
        }
    }

    pub fn is_cusp(self) -> bool {
        matches!(self, Label::Cusp32 | Label::Cusp52 | Label::Cusp43 | Label::Cusp53)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A label with the quantities that decided it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspLabel {
    pub label: Label,
    pub criterion: String,
    pub criterion_values: BTreeMap<String, f64>,
    pub thresholds: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// For surface labels: the profile label was lifted to a cuspidal edge.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub cuspidal_edge: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<String>,
}

impl CuspLabel {
    /// Unresolved, with no diagnostics yet.
    pub fn new(criterion: &str) -> Self {
        CuspLabel {
            label: Label::Unresolved,
            criterion: criterion.into(),
            criterion_values: BTreeMap::new(),
            thresholds: BTreeMap::new(),
            notes: Vec::new(),
            cuspidal_edge: false,
            normal_form: None,
        }
    }

    /// Record `value` under `name` and test it against `tol·max(1, scale)`.
    fn nonzero(&mut self, name: &str, value: f64, scale: f64, tol: f64) -> bool {
        let thr = tol * scale.max(1.0);
        self.criterion_values.insert(name.into(), value);
        self.thresholds.insert(name.into(), thr);
        value.abs() > thr
    }

    fn with(mut self, label: Label) -> Self {
        self.label = label;
        self
    }

    fn note(mut self, s: &str) -> Self {
        self.notes.push(s.into());
        self
    }
}

/// JSON classification record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub t0: f64,
    #[serde(flatten)]
    pub label: CuspLabel,
}

// ---------------------------------------------------------------------------
// Orders of zeros.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroOrder {
    /// `f(t₀) ≠ 0`.
    NoZero,
    Order(usize),
    /// All derivatives up to the cap vanish.
    AtLeast(usize),
}

impl ZeroOrder {
    /// `0` for no zero, the order, or `cap + 1`.
    pub fn as_int(self) -> usize {
        match self {
            ZeroOrder::NoZero => 0,
            ZeroOrder::Order(k) | ZeroOrder::AtLeast(k) => k,
        }
    }
}

/// Order of the zero of `f` at the jet's base point, derivatives up to `cap`.
pub fn ord_of(f: &Jet, cap: usize, tol: f64) -> ZeroOrder {
    let cap = cap.min(f.order());
    let d = f.derivatives();
    let scale = d[..=cap].iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let thr = tol * scale;
    if d[0].abs() > thr {
        return ZeroOrder::NoZero;
    }
    match (1..=cap).find(|&k| d[k].abs() > thr) {
        Some(k) => ZeroOrder::Order(k),
        None => ZeroOrder::AtLeast(cap + 1),
    }
}

// ---------------------------------------------------------------------------
// Derivative criterion.

type V2 = [f64; 2];

fn det(a: V2, b: V2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn norm(a: V2) -> f64 {
    a[0].hypot(a[1])
}

/// Cusp type of `γ = (x, z)` from its derivatives at the base point; jets of
/// order 5 are needed to separate every case.
pub fn cusp_classify_derivatives(x: &Jet, z: &Jet, tol: f64) -> CuspLabel {
    let mut out = CuspLabel::new("derivative");
    let o = x.order().min(z.order());
    let d: Vec<V2> = (0..=5)
        .map(|k| {
            if k <= o {
                [x.derivative(k), z.derivative(k)]
            } else {
                [0.0, 0.0]
            }
        })
        .collect();
    let vscale = d[1..].iter().fold(0.0f64, |m, v| m.max(norm(*v)));
    if out.nonzero("|d1|", norm(d[1]), vscale, tol) {
        return out.with(Label::Regular);
    }
    if o < 5 {
        out.notes.push(format!("jets of order {o} only"));
    }
    if out.nonzero("|d2|", norm(d[2]), vscale, tol) {
        if out.nonzero("det(d2,d3)", det(d[2], d[3]), norm(d[2]) * norm(d[3]), tol) {
            return out.with(Label::Cusp32);
        }
        let n2 = norm(d[2]);
        let c = (d[3][0] * d[2][0] + d[3][1] * d[2][1]) / (n2 * n2);
        let resid = norm([d[3][0] - c * d[2][0], d[3][1] - c * d[2][1]]);
        out.criterion_values.insert("C".into(), c);
        if out.nonzero("collinearity", resid, norm(d[3]), tol) {
            return out.note("d3 not a multiple of d2");
        }
        let w = [3.0 * d[5][0] - 10.0 * c * d[4][0], 3.0 * d[5][1] - 10.0 * c * d[4][1]];
        if out.nonzero("det(d2,3d5-10Cd4)", det(d[2], w), n2 * norm(w).max(norm(d[5])), tol) {
            return out.with(Label::Cusp52);
        }
        return out;
    }
    if out.nonzero("det(d3,d4)", det(d[3], d[4]), norm(d[3]) * norm(d[4]), tol) {
        return out.with(Label::Cusp43);
    }
    if out.nonzero("det(d3,d5)", det(d[3], d[5]), norm(d[3]) * norm(d[5]), tol) {
        return out.with(Label::Cusp53);
    }
    out
}

pub fn classify_point_derivatives(p: &PointJets, tol: f64) -> CuspLabel {
    cusp_classify_derivatives(&p.x, &p.z, tol)
}

// ---------------------------------------------------------------------------
// Curvature criterion.

fn jet_scale(j: &Jet, upto: usize) -> f64 {
    (0..=upto.min(j.order())).fold(0.0f64, |m, k| m.max(j.derivative(k).abs()))
}

fn der(j: &Jet, k: usize) -> f64 {
    if k <= j.order() {
        j.derivative(k)
    } else {
        0.0
    }
}

/// Cusp type from the curvature `(ℓ, β)` at a zero of `β`.
pub fn cusp_classify_curvature(ell: &Jet, beta: &Jet, tol: f64) -> CuspLabel {
    let mut out = CuspLabel::new("curvature");
    let sb = jet_scale(beta, 2);
    let sl = jet_scale(ell, 2);
    let (b0, b1, b2) = (der(beta, 0), der(beta, 1), der(beta, 2));
    let (l0, l1, l2) = (der(ell, 0), der(ell, 1), der(ell, 2));
    if out.nonzero("beta", b0, sb, tol) {
        return out.with(Label::Regular);
    }
    let b1_nz = out.nonzero("beta'", b1, sb, tol);
    let l0_nz = out.nonzero("ell", l0, sl, tol);
    if b1_nz {
        if l0_nz {
            out.nonzero("beta'*ell", b1 * l0, sb * sl, tol);
            return out.with(Label::Cusp32);
        }
        if out.nonzero("beta''*ell'-beta'*ell''", b2 * l1 - b1 * l2, sb * sl, tol) {
            return out.with(Label::Cusp52);
        }
        return out;
    }
    if out.nonzero("beta''*ell", b2 * l0, sb * sl, tol) {
        return out.with(Label::Cusp43);
    }
    if !l0_nz && out.nonzero("beta''*ell'", b2 * l1, sb * sl, tol) {
        return out.with(Label::Cusp53);
    }
    out
}

pub fn classify_point_curvature(p: &PointJets, tol: f64) -> CuspLabel {
    cusp_classify_curvature(&p.ell(), &p.beta(), tol)
}

// ---------------------------------------------------------------------------
// Gauss-ratio and mean-ratio singular points.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussFront {
    Front,
    FrontalNotFront,
    /// `ord(a) > ord(β)`, impossible for a Gauss-ratio construction.
    Inconsistent,
    /// An order reached the derivative cap.
    Undetermined,
}

/// Front test at a singular point of a Gauss-ratio profile: a front iff
/// `ord(a) = ord(β)`.
pub fn gauss_front_status(a: &Jet, beta: &Jet, alpha0: f64, x0: f64, tol: f64) -> Result<GaussFront> {
    if x0.abs() <= tol || alpha0.abs() <= tol {
        return Err(Error::Hypothesis("x(t0) and alpha(t0) must be nonzero".into()));
    }
    let ob = ord_of(beta, 5, tol);
    let n = match ob {
        ZeroOrder::NoZero => return Err(Error::Hypothesis("beta(t0) must vanish".into())),
        ZeroOrder::Order(n) => n,
        ZeroOrder::AtLeast(_) => return Ok(GaussFront::Undetermined),
    };
    Ok(match ord_of(a, 5, tol) {
        ZeroOrder::NoZero => GaussFront::FrontalNotFront,
        ZeroOrder::Order(m) if m == n => GaussFront::Front,
        ZeroOrder::Order(m) if m < n => GaussFront::FrontalNotFront,
        ZeroOrder::Order(_) => GaussFront::Inconsistent,
        ZeroOrder::AtLeast(_) => GaussFront::Undetermined,
    })
}

/// Cusp type of a constant-Gauss-ratio profile from `ord(a)` and `ord(β)`;
/// 5/2 never occurs.
pub fn constant_gauss_cusp(ord_a: usize, ord_beta: usize) -> Result<CuspLabel> {
    if ord_a > ord_beta {
        return Err(Error::Hypothesis(format!(
            "ord(a) = {ord_a} exceeds ord(beta) = {ord_beta}"
        )));
    }
    let mut out = CuspLabel::new("constant_gauss");
    out.criterion_values.insert("ord(a)".into(), ord_a as f64);
    out.criterion_values.insert("ord(beta)".into(), ord_beta as f64);
    Ok(match (ord_a, ord_beta) {
        (1, 1) => out.with(Label::Cusp32),
        (2, 2) => out.with(Label::Cusp43),
        (1, 2) => out.with(Label::Cusp53),
        _ => out.note("5/2 impossible"),
    })
}

/// Cusp type of a mean-ratio profile at a zero of `β`; 3/2 and 4/3 never
/// occur and constant `α` gives no j/i-cusp.
pub fn constant_mean_cusp(alpha: &Jet, beta: &Jet, tol: f64) -> CuspLabel {
    let mut out = CuspLabel::new("constant_mean");
    let sa = jet_scale(alpha, alpha.order());
    let sb = jet_scale(beta, 2);
    if out.nonzero("beta", der(beta, 0), sb, tol) {
        return out.with(Label::Regular);
    }
    let thr = tol * sa.max(1.0);
    if (1..=alpha.order()).all(|k| alpha.derivative(k).abs() <= thr) {
        return out.note("alpha constant: no j/i-cusp");
    }
    let (a1, b1, b2) = (der(alpha, 1), der(beta, 1), der(beta, 2));
    if out.nonzero("beta'", b1, sb, tol) {
        if out.nonzero("beta'*alpha'", b1 * a1, sb * sa, tol) {
            return out.with(Label::Cusp52);
        }
        return out;
    }
    if out.nonzero("beta''*alpha'", b2 * a1, sb * sa, tol) {
        return out.with(Label::Cusp53);
    }
    out
}

// ---------------------------------------------------------------------------
// Surfaces of revolution.

/// Label of the z-axis revolute at `t₀`: off the axis the profile's cusp
/// lifts to a cuspidal edge; on the axis a cone or the `(±t^(k+1), t)` form.
pub fn revolution_singularity_classify(c: &LegendreCurve, t0: f64, tol: f64) -> Result<CuspLabel> {
    let p = c.jets_at(t0, 5)?;
    let x = p.x.value();
    if x.abs() > tol {
        let mut l = classify_point_derivatives(&p, tol);
        if l.label == Label::Unresolved {
            let k = classify_point_curvature(&p, tol);
            if k.label != Label::Unresolved {
                l = k;
            }
        }
        l.cuspidal_edge = l.label.is_cusp();
        l.criterion_values.insert("x".into(), x);
        return Ok(l);
    }
    let mut out = CuspLabel::new("axis");
    out.criterion_values.insert("x".into(), x);
    if revolution::cone_type_at(&p, tol) {
        return Ok(out.with(Label::ConeType));
    }
    let zd = p.z.derivative(1);
    let order = ord_of(&p.x, 5, tol);
    if let (ZeroOrder::Order(k), true) = (order, out.nonzero("z'", zd, jet_scale(&p.z, 1), tol)) {
        out.criterion_values.insert("ord(x)".into(), k as f64);
        let sign = if p.x.derivative(k) * zd > 0.0 { "" } else { "-" };
        out.normal_form = Some(format!("({sign}t^{k}, t)"));
        return Ok(out.with(Label::AxisDegenerate));
    }
    Ok(out)
}
