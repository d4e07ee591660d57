//! Framed surfaces `(x, n, s)` sampled on a `(u, v)` grid.

use serde::Serialize;

use crate::error::{Error, Result};

pub type V3 = [f64; 3];

pub fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: V3, k: f64) -> V3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

pub fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

/// A vector field and its first partials at a node; `duv` only when second
/// order data is available.
#[derive(Clone, Debug, PartialEq)]
pub struct Partials {
    pub val: V3,
    pub du: V3,
    pub dv: V3,
    pub duv: Option<V3>,
}

impl Partials {
    pub fn constant(val: V3) -> Self {
        Partials {
            val,
            du: [0.0; 3],
            dv: [0.0; 3],
            duv: Some([0.0; 3]),
        }
    }

    fn axpy(&self, k: f64, o: &Partials) -> Partials {
        Partials {
            val: add(self.val, scale(o.val, k)),
            du: add(self.du, scale(o.du, k)),
            dv: add(self.dv, scale(o.dv, k)),
            duv: match (self.duv, o.duv) {
                (Some(a), Some(b)) => Some(add(a, scale(b, k))),
                _ => None,
            },
        }
    }

    fn scaled(&self, k: f64) -> Partials {
        Partials {
            val: scale(self.val, k),
            du: scale(self.du, k),
            dv: scale(self.dv, k),
            duv: self.duv.map(|v| scale(v, k)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameNode {
    pub x: Partials,
    pub n: Partials,
    pub s: Partials,
}

impl FrameNode {
    /// `t = n × s`.
    pub fn t(&self) -> V3 {
        cross(self.n.val, self.s.val)
    }
}

/// Row-major nodes: index `i * v.len() + j` is `(u[i], v[j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct FramedSurfaceGrid {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub nodes: Vec<FrameNode>,
}

/// Tolerance on `|n·n − 1|`, `|s·s − 1|`, `|n·s|`.
pub const FRAME_TOL: f64 = 1e-9;
/// Relative tolerance on `|x_u·n|`, `|x_v·n|`.
pub const TANGENCY_TOL: f64 = 1e-8;

impl FramedSurfaceGrid {
    pub fn new(u: Vec<f64>, v: Vec<f64>, nodes: Vec<FrameNode>) -> Result<Self> {
        if nodes.len() != u.len() * v.len() {
            return Err(Error::InvalidArgument(format!(
                "{} nodes for a {}x{} grid",
                nodes.len(),
                u.len(),
                v.len()
            )));
        }
        Ok(FramedSurfaceGrid { u, v, nodes })
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.v.len() + j
    }

    /// Frame and tangency conditions at every node.
    pub fn check(&self) -> Result<()> {
        for (k, nd) in self.nodes.iter().enumerate() {
            let n = nd.n.val;
            let s = nd.s.val;
            let checks = [
                ("|n|^2 - 1", dot(n, n) - 1.0, FRAME_TOL),
                ("|s|^2 - 1", dot(s, s) - 1.0, FRAME_TOL),
                ("n.s", dot(n, s), FRAME_TOL),
                (
                    "x_u.n",
                    dot(nd.x.du, n),
                    TANGENCY_TOL * (1.0 + norm(nd.x.du)),
                ),
                (
                    "x_v.n",
                    dot(nd.x.dv, n),
                    TANGENCY_TOL * (1.0 + norm(nd.x.dv)),
                ),
            ];
            for (what, r, tol) in checks {
                if !(r.abs() <= tol) {
                    return Err(Error::FrameViolation {
                        node: k,
                        what,
                        residual: r,
                    });
                }
            }
        }
        Ok(())
    }

    /// `x + λ n` with the same frame.
    pub fn parallel(&self, lambda: f64) -> FramedSurfaceGrid {
        let nodes = self
            .nodes
            .iter()
            .map(|nd| FrameNode {
                x: nd.x.axpy(lambda, &nd.n),
                n: nd.n.clone(),
                s: nd.s.clone(),
            })
            .collect();
        FramedSurfaceGrid {
            u: self.u.clone(),
            v: self.v.clone(),
            nodes,
        }
    }

    /// `r x` with the same frame.
    pub fn similar(&self, r: f64) -> FramedSurfaceGrid {
        let nodes = self
            .nodes
            .iter()
            .map(|nd| FrameNode {
                x: nd.x.scaled(r),
                n: nd.n.clone(),
                s: nd.s.clone(),
            })
            .collect();
        FramedSurfaceGrid {
            u: self.u.clone(),
            v: self.v.clone(),
            nodes,
        }
    }
}

/// The ten basic invariants at one node.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Invariants {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub e1: f64,
    pub f1: f64,
    pub g1: f64,
    pub e2: f64,
    pub f2: f64,
    pub g2: f64,
}

impl Invariants {
    pub fn as_array(&self) -> [f64; 10] {
        [
            self.a1, self.b1, self.a2, self.b2, self.e1, self.f1, self.g1, self.e2, self.f2,
            self.g2,
        ]
    }
}

/// The derivatives entering the integrability conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct InvariantDerivs {
    pub a1_v: f64,
    pub b1_v: f64,
    pub a2_u: f64,
    pub b2_u: f64,
    pub e1_v: f64,
    pub f1_v: f64,
    pub e2_u: f64,
    pub f2_u: f64,
    pub g1_v: f64,
    pub g2_u: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasicInvariants {
    pub nu: usize,
    pub nv: usize,
    pub values: Vec<Invariants>,
    pub derivs: Option<Vec<InvariantDerivs>>,
}

pub fn basic_invariants_of(s: &FramedSurfaceGrid) -> Result<BasicInvariants> {
    s.check()?;
    let mut values = Vec::with_capacity(s.nodes.len());
    let mut derivs = Some(Vec::with_capacity(s.nodes.len()));
    for nd in &s.nodes {
        let (x, n, sv) = (&nd.x, &nd.n, &nd.s);
        let t = nd.t();
        values.push(Invariants {
            a1: dot(x.du, sv.val),
            b1: dot(x.du, t),
            a2: dot(x.dv, sv.val),
            b2: dot(x.dv, t),
            e1: dot(n.du, sv.val),
            f1: dot(n.du, t),
            g1: dot(sv.du, t),
            e2: dot(n.dv, sv.val),
            f2: dot(n.dv, t),
            g2: dot(sv.dv, t),
        });
        match (x.duv, n.duv, sv.duv, derivs.as_mut()) {
            (Some(xuv), Some(nuv), Some(suv), Some(d)) => {
                let t_u = add(cross(n.du, sv.val), cross(n.val, sv.du));
                let t_v = add(cross(n.dv, sv.val), cross(n.val, sv.dv));
                d.push(InvariantDerivs {
                    a1_v: dot(xuv, sv.val) + dot(x.du, sv.dv),
                    b1_v: dot(xuv, t) + dot(x.du, t_v),
                    a2_u: dot(xuv, sv.val) + dot(x.dv, sv.du),
                    b2_u: dot(xuv, t) + dot(x.dv, t_u),
                    e1_v: dot(nuv, sv.val) + dot(n.du, sv.dv),
                    f1_v: dot(nuv, t) + dot(n.du, t_v),
                    e2_u: dot(nuv, sv.val) + dot(n.dv, sv.du),
                    f2_u: dot(nuv, t) + dot(n.dv, t_u),
                    g1_v: dot(suv, t) + dot(sv.du, t_v),
                    g2_u: dot(suv, t) + dot(sv.dv, t_u),
                });
            }
            _ => derivs = None,
        }
    }
    Ok(BasicInvariants {
        nu: s.u.len(),
        nv: s.v.len(),
        values,
        derivs,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegrabilityReport {
    /// Maxima of the six conditions, in the order they are usually written.
    pub residuals: [f64; 6],
    pub max: f64,
}

/// The six integrability conditions at one node.
pub fn integrability_at(i: &Invariants, d: &InvariantDerivs) -> [f64; 6] {
    [
        d.a1_v - i.b1 * i.g2 - d.a2_u + i.b2 * i.g1,
        d.b1_v - i.a2 * i.g1 - d.b2_u + i.a1 * i.g2,
        i.a1 * i.e2 + i.b1 * i.f2 - i.a2 * i.e1 - i.b2 * i.f1,
        d.e1_v - i.f1 * i.g2 - d.e2_u + i.f2 * i.g1,
        d.f1_v - i.e2 * i.g1 - d.f2_u + i.e1 * i.g2,
        d.g1_v - i.e1 * i.f2 - d.g2_u + i.e2 * i.f1,
    ]
}

pub fn integrability_residual(inv: &BasicInvariants) -> Result<IntegrabilityReport> {
    let d = inv.derivs.as_ref().ok_or(Error::MissingDerivatives(
        "integrability needs mixed second partials",
    ))?;
    let mut res = [0.0f64; 6];
    for (i, dd) in inv.values.iter().zip(d) {
        for (r, v) in res.iter_mut().zip(integrability_at(i, dd)) {
            *r = r.max(v.abs());
        }
    }
    Ok(IntegrabilityReport {
        residuals: res,
        max: res.iter().copied().fold(0.0, f64::max),
    })
}

fn det(a1: f64, b1: f64, a2: f64, b2: f64) -> f64 {
    a1 * b2 - a2 * b1
}

/// `(J, K, H)` and the five further determinants of the concomitant mapping.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct CurvatureNode {
    pub j: f64,
    pub k: f64,
    pub h: f64,
    /// `det(a,g), det(b,g), det(e,g), det(f,g), det(a,e)`.
    pub extras: [f64; 5],
}

impl CurvatureNode {
    pub fn from_invariants(i: &Invariants) -> Self {
        CurvatureNode {
            j: det(i.a1, i.b1, i.a2, i.b2),
            k: det(i.e1, i.f1, i.e2, i.f2),
            h: -0.5 * (det(i.a1, i.f1, i.a2, i.f2) - det(i.b1, i.e1, i.b2, i.e2)),
            extras: [
                det(i.a1, i.g1, i.a2, i.g2),
                det(i.b1, i.g1, i.b2, i.g2),
                det(i.e1, i.g1, i.e2, i.g2),
                det(i.f1, i.g1, i.f2, i.g2),
                det(i.a1, i.e1, i.a2, i.e2),
            ],
        }
    }

    pub fn c_norm(&self) -> f64 {
        (self.j * self.j + self.k * self.k + self.h * self.h).sqrt()
    }

    pub fn i_norm(&self) -> f64 {
        let e: f64 = self.extras.iter().map(|v| v * v).sum();
        (self.c_norm().powi(2) + e).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FSCurvature {
    pub nu: usize,
    pub nv: usize,
    pub nodes: Vec<CurvatureNode>,
}

impl FSCurvature {
    fn max_of(&self, f: impl Fn(&CurvatureNode) -> f64) -> f64 {
        self.nodes.iter().map(f).fold(0.0, f64::max)
    }
}

pub fn curvature_of(inv: &BasicInvariants) -> FSCurvature {
    FSCurvature {
        nu: inv.nu,
        nv: inv.nv,
        nodes: inv.values.iter().map(CurvatureNode::from_invariants).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Immersion {
    Regular,
    LegendreImmersion,
    FramedImmersion,
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ImmersionStatus {
    pub label: Immersion,
    pub regular: bool,
    pub legendre_immersion: bool,
    pub framed_immersion: bool,
}

/// Thresholds are `tol · (1 + grid max)` of `|J|`, `‖C_F‖`, `‖I_F‖` respectively.
pub fn immersion_status(c: &FSCurvature, node: usize, tol: f64) -> ImmersionStatus {
    let nd = &c.nodes[node];
    let regular = nd.j.abs() > tol * (1.0 + c.max_of(|n| n.j.abs()));
    let legendre_immersion = nd.c_norm() > tol * (1.0 + c.max_of(CurvatureNode::c_norm));
    let framed_immersion = nd.i_norm() > tol * (1.0 + c.max_of(CurvatureNode::i_norm));
    let label = if regular {
        Immersion::Regular
    } else if legendre_immersion {
        Immersion::LegendreImmersion
    } else if framed_immersion {
        Immersion::FramedImmersion
    } else {
        Immersion::Degenerate
    };
    ImmersionStatus {
        label,
        regular,
        legendre_immersion,
        framed_immersion,
    }
}

/// Invariants of `x + λn` by the transform `G ↦ G + λ[[e1, f1], [e2, f2]]`.
pub fn parallel_invariants(inv: &BasicInvariants, lambda: f64) -> BasicInvariants {
    let values = inv
        .values
        .iter()
        .map(|i| Invariants {
            a1: i.a1 + lambda * i.e1,
            b1: i.b1 + lambda * i.f1,
            a2: i.a2 + lambda * i.e2,
            b2: i.b2 + lambda * i.f2,
            ..*i
        })
        .collect();
    let derivs = inv.derivs.as_ref().map(|ds| {
        ds.iter()
            .map(|d| InvariantDerivs {
                a1_v: d.a1_v + lambda * d.e1_v,
                b1_v: d.b1_v + lambda * d.f1_v,
                a2_u: d.a2_u + lambda * d.e2_u,
                b2_u: d.b2_u + lambda * d.f2_u,
                ..*d
            })
            .collect()
    });
    BasicInvariants {
        nu: inv.nu,
        nv: inv.nv,
        values,
        derivs,
    }
}

pub fn parallel_surface(
    s: &FramedSurfaceGrid,
    inv: &BasicInvariants,
    lambda: f64,
) -> (FramedSurfaceGrid, BasicInvariants) {
    (s.parallel(lambda), parallel_invariants(inv, lambda))
}

/// `J − 2Hλ + Kλ²`, `K`, `H − Kλ`; the extras follow from the same transform.
pub fn parallel_curvature(c: &FSCurvature, lambda: f64) -> FSCurvature {
    let l = lambda;
    let nodes = c
        .nodes
        .iter()
        .map(|n| CurvatureNode {
            j: n.j - 2.0 * n.h * l + n.k * l * l,
            k: n.k,
            h: n.h - n.k * l,
            extras: [
                n.extras[0] + l * n.extras[2],
                n.extras[1] + l * n.extras[3],
                n.extras[2],
                n.extras[3],
                n.extras[4],
            ],
        })
        .collect();
    FSCurvature {
        nu: c.nu,
        nv: c.nv,
        nodes,
    }
}

/// Curvature of `(r x, n, s)`: `r² J`, `K`, `r H`.
pub fn similar_surface(inv: &BasicInvariants, c: &FSCurvature, r: f64) -> Result<FSCurvature> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("similarity ratio {r}")));
    }
    if inv.values.len() != c.nodes.len() {
        return Err(Error::InvalidArgument(
            "invariants and curvature differ in size".into(),
        ));
    }
    let nodes = c
        .nodes
        .iter()
        .map(|n| CurvatureNode {
            j: r * r * n.j,
            k: n.k,
            h: r * n.h,
            extras: [
                r * n.extras[0],
                r * n.extras[1],
                n.extras[2],
                n.extras[3],
                r * n.extras[4],
            ],
        })
        .collect();
    Ok(FSCurvature {
        nu: c.nu,
        nv: c.nv,
        nodes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FocalRoot {
    pub lambda: f64,
    pub multiplicity: u8,
}

/// Real roots of `Kλ² − 2Hλ + J = 0`, ascending.
pub fn focal_radii(c: &FSCurvature, node: usize, tol: f64) -> Vec<FocalRoot> {
    let CurvatureNode { j, k, h, .. } = c.nodes[node];
    let single = |lambda| FocalRoot {
        lambda,
        multiplicity: 1,
    };
    if k.abs() <= tol {
        if h.abs() > tol {
            return vec![single(j / (2.0 * h))];
        }
        return Vec::new();
    }
    let disc = h * h - k * j;
    if disc.abs() <= tol * tol {
        return vec![FocalRoot {
            lambda: h / k,
            multiplicity: 2,
        }];
    }
    if disc < 0.0 {
        return Vec::new();
    }
    // Cancellation-free pair: q/K and J/q. q ≠ 0 since disc > tol².
    let q = h + if h >= 0.0 { disc.sqrt() } else { -disc.sqrt() };
    let (r1, r2) = (q / k, j / q);
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    vec![single(lo), single(hi)]
}

/// One line of the JSON curvature summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeReport {
    pub node: usize,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub status: Immersion,
}

pub fn report(c: &FSCurvature, tol: f64) -> Vec<NodeReport> {
    (0..c.nodes.len())
        .map(|i| NodeReport {
            node: i,
            j: c.nodes[i].j,
            k: c.nodes[i].k,
            h: c.nodes[i].h,
            status: immersion_status(c, i, tol).label,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub(crate) fn flat_sheet() -> FramedSurfaceGrid {
        let u = vec![0.0, 0.5, 1.0];
        let v = vec![0.0, 1.0];
        let mut nodes = Vec::new();
        for &uu in &u {
            for &vv in &v {
                nodes.push(FrameNode {
                    x: Partials {
                        val: [uu, vv, 0.0],
                        du: [1.0, 0.0, 0.0],
                        dv: [0.0, 1.0, 0.0],
                        duv: Some([0.0; 3]),
                    },
                    n: Partials::constant([0.0, 0.0, 1.0]),
                    s: Partials::constant([1.0, 0.0, 0.0]),
                });
            }
        }
        FramedSurfaceGrid::new(u, v, nodes).unwrap()
    }

    #[test]
    fn flat_sheet_invariants() {
        let inv = basic_invariants_of(&flat_sheet()).unwrap();
        for i in &inv.values {
            // t = n × s = (0, 1, 0).
            assert_eq!(
                i.as_array(),
                [1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
            );
        }
        let r = integrability_residual(&inv).unwrap();
        assert_eq!(r.max, 0.0);
        let c = curvature_of(&inv);
        assert_eq!((c.nodes[0].j, c.nodes[0].k, c.nodes[0].h), (1.0, 0.0, 0.0));
        assert_eq!(immersion_status(&c, 0, 1e-8).label, Immersion::Regular);
        assert!(focal_radii(&c, 0, 1e-8).is_empty());
        let s = similar_surface(&inv, &c, 2.0).unwrap();
        assert_eq!((s.nodes[0].j, s.nodes[0].k, s.nodes[0].h), (4.0, 0.0, 0.0));
        assert!(similar_surface(&inv, &c, 0.0).is_err());
    }

    #[test]
    fn frame_violation_detected() {
        let mut s = flat_sheet();
        s.nodes[3].n.val = [0.0, 0.0, 1.1];
        assert!(matches!(
            basic_invariants_of(&s),
            Err(Error::FrameViolation { node: 3, .. })
        ));
        let mut s = flat_sheet();
        s.nodes[1].x.du = [1.0, 0.0, 0.5];
        assert!(basic_invariants_of(&s).is_err());
    }

    #[test]
    fn point_surface_is_degenerate() {
        let nodes = (0..4)
            .map(|_| FrameNode {
                x: Partials::constant([1.0, 2.0, 3.0]),
                n: Partials::constant([0.0, 0.0, 1.0]),
                s: Partials::constant([1.0, 0.0, 0.0]),
            })
            .collect();
        let g = FramedSurfaceGrid::new(vec![0.0, 1.0], vec![0.0, 1.0], nodes).unwrap();
        let c = curvature_of(&basic_invariants_of(&g).unwrap());
        let st = immersion_status(&c, 0, 1e-8);
        assert_eq!(st.label, Immersion::Degenerate);
        assert!(!st.regular && !st.legendre_immersion && !st.framed_immersion);
    }

    #[test]
    fn perturbed_invariants_not_integrable() {
        let mut inv = basic_invariants_of(&flat_sheet()).unwrap();
        inv.values[2].e2 = 0.3;
        inv.values[2].g1 = 0.7;
        let r = integrability_residual(&inv).unwrap();
        assert!(r.max > 0.1);
    }

    #[test]
    fn missing_mixed_partials() {
        let mut s = flat_sheet();
        s.nodes[0].x.duv = None;
        let inv = basic_invariants_of(&s).unwrap();
        assert!(inv.derivs.is_none());
        assert!(integrability_residual(&inv).is_err());
    }

    #[test]
    fn focal_root_cases() {
        let mk = |j, k, h| FSCurvature {
            nu: 1,
            nv: 1,
            nodes: vec![CurvatureNode {
                j,
                k,
                h,
                extras: [0.0; 5],
            }],
        };
        // (λ - 1)(λ - 3) = λ² - 4λ + 3.
        let r = focal_radii(&mk(3.0, 1.0, 2.0), 0, 1e-12);
        assert_eq!(r.len(), 2);
        assert_relative_eq!(r[0].lambda, 1.0, epsilon = 1e-14);
        assert_relative_eq!(r[1].lambda, 3.0, epsilon = 1e-14);
        // (λ + 1)(λ + 3) with H < 0.
        let r = focal_radii(&mk(3.0, 1.0, -2.0), 0, 1e-12);
        assert_relative_eq!(r[0].lambda, -3.0, epsilon = 1e-14);
        assert_relative_eq!(r[1].lambda, -1.0, epsilon = 1e-14);
        let r = focal_radii(&mk(1.0, 1.0, 1.0), 0, 1e-8);
        assert_eq!(r, vec![FocalRoot { lambda: 1.0, multiplicity: 2 }]);
        assert!(focal_radii(&mk(2.0, 1.0, 1.0), 0, 1e-8).is_empty());
        let r = focal_radii(&mk(3.0, 0.0, 0.5), 0, 1e-8);
        assert_eq!(r, vec![FocalRoot { lambda: 3.0, multiplicity: 1 }]);
        // H = 0: roots ±√(−J/K).
        let r = focal_radii(&mk(-4.0, 1.0, 0.0), 0, 1e-8);
        assert_relative_eq!(r[0].lambda, -2.0);
        assert_relative_eq!(r[1].lambda, 2.0);
    }
}
