//! CSV curves, OBJ meshes and canonical JSON.

use std::io::{Read, Write};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::framed::{self, V3};
use crate::legendre::{LegendreCurve, SampledProfile};
use crate::revolution::{self, RevolutionSurface};

/// Columns written for every curve.
pub const CURVE_COLUMNS: [&str; 7] = ["t", "x", "z", "a", "b", "ell", "beta"];

/// Floats in artifacts carry 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn write_curve_csv<W: Write>(c: &LegendreCurve, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CURVE_COLUMNS)?;
    for i in 0..c.len() {
        let row = [
            c.curve.t[i],
            c.curve.x[i].value(),
            c.curve.z[i].value(),
            c.normal.a[i].value(),
            c.normal.b[i].value(),
            c.curvature.ell[i].value(),
            c.curvature.beta[i].value(),
        ];
        out.write_record(row.iter().map(|&v| fmt_f64(v)))?;
    }
    out.flush()?;
    Ok(())
}

pub fn curve_csv_string(c: &LegendreCurve) -> Result<String> {
    let mut buf = Vec::new();
    write_curve_csv(c, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ASCII"))
}

/// Columns of a curve file. `ell` and `beta` are optional on input.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CurveTable {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub ell: Option<Vec<f64>>,
    pub beta: Option<Vec<f64>>,
}

impl CurveTable {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn into_profile(self) -> Result<SampledProfile> {
        SampledProfile::new(self.t, self.x, self.z, self.a, self.b)
    }
}

/// Read a curve CSV with a header row; columns may appear in any order and
/// unknown columns are ignored.
pub fn read_curve_csv<R: Read>(r: R) -> Result<CurveTable> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let headers = rd.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let mut idx = [0usize; 5];
    for (k, name) in CURVE_COLUMNS[..5].iter().enumerate() {
        idx[k] = col(name)
            .ok_or_else(|| Error::InvalidArgument(format!("curve CSV lacks column {name:?}")))?;
    }
    let (ie, ib) = (col("ell"), col("beta"));
    let mut table = CurveTable {
        ell: ie.map(|_| Vec::new()),
        beta: ib.map(|_| Vec::new()),
        ..Default::default()
    };
    for (line, rec) in rd.records().enumerate() {
        let rec = rec?;
        let get = |i: usize| -> Result<f64> {
            let s = rec.get(i).ok_or_else(|| {
                Error::InvalidArgument(format!("row {} is missing column {i}", line + 1))
            })?;
            let v: f64 = s.parse().map_err(|_| {
                Error::InvalidArgument(format!("row {}: {s:?} is not a number", line + 1))
            })?;
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("row {}: non-finite value", line + 1)));
            }
            Ok(v)
        };
        table.t.push(get(idx[0])?);
        table.x.push(get(idx[1])?);
        table.z.push(get(idx[2])?);
        table.a.push(get(idx[3])?);
        table.b.push(get(idx[4])?);
        if let (Some(i), Some(v)) = (ie, table.ell.as_mut()) {
            v.push(get(i)?);
        }
        if let (Some(i), Some(v)) = (ib, table.beta.as_mut()) {
            v.push(get(i)?);
        }
    }
    Ok(table)
}

/// Quad mesh of a revolute. The seam column is duplicated at `θ = 2π`, so
/// there are `n_t · (n_θ + 1)` vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub n_t: usize,
    pub n_theta: usize,
    pub vertices: Vec<V3>,
    /// Zero-based vertex indices, counter-clockwise seen from `+n`.
    pub faces: Vec<[usize; 4]>,
}

impl Mesh {
    pub fn from_surface(s: &RevolutionSurface) -> Mesh {
        let (nt, nth) = (s.n_t(), s.n_theta());
        let cols = nth + 1;
        let angle = |k: usize| {
            if k == nth {
                2.0 * std::f64::consts::PI
            } else {
                s.theta[k]
            }
        };
        let c = &s.profile;
        let mut vertices = Vec::with_capacity(nt * cols);
        let mut normals = Vec::with_capacity(nt * cols);
        for i in 0..nt {
            let [x, z] = c.point(i);
            let [a, b] = c.normal_at(i);
            for k in 0..cols {
                vertices.push(revolution::surface_point(s.axis, x, z, angle(k)));
                normals.push(revolution::surface_normal(s.axis, a, b, angle(k)));
            }
        }
        let mut faces = Vec::with_capacity(nt.saturating_sub(1) * nth);
        for i in 0..nt.saturating_sub(1) {
            for k in 0..nth {
                let q = [i * cols + k, (i + 1) * cols + k, (i + 1) * cols + k + 1, i * cols + k + 1];
                let d1 = framed::sub(vertices[q[2]], vertices[q[0]]);
                let d2 = framed::sub(vertices[q[3]], vertices[q[1]]);
                let n = q.iter().fold([0.0; 3], |acc, &v| framed::add(acc, normals[v]));
                if framed::dot(framed::cross(d1, d2), n) < 0.0 {
                    faces.push([q[0], q[3], q[2], q[1]]);
                } else {
                    faces.push(q);
                }
            }
        }
        Mesh {
            n_t: nt,
            n_theta: nth,
            vertices,
            faces,
        }
    }

    /// Largest distance between a seam vertex and its `θ = 0` twin.
    pub fn seam_gap(&self) -> f64 {
        let cols = self.n_theta + 1;
        (0..self.n_t)
            .map(|i| framed::norm(framed::sub(self.vertices[i * cols], self.vertices[i * cols + self.n_theta])))
            .fold(0.0, f64::max)
    }

    pub fn write_obj<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# {} x {} revolute", self.n_t, self.n_theta + 1)?;
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", fmt_f64(v[0]), fmt_f64(v[1]), fmt_f64(v[2]))?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
        }
        Ok(())
    }
}

/// Pretty JSON with sorted keys and every float at 17 significant digits.
pub fn to_json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    let value = serde_json::to_value(v)?;
    let mut out = String::new();
    emit(&value, 0, &mut out);
    out.push('\n');
    Ok(out)
}

fn emit(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize, out: &mut String| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) if !n.is_f64() => out.push_str(&i.to_string()),
            (_, Some(u), _) if !n.is_f64() => out.push_str(&u.to_string()),
            (_, _, Some(f)) => out.push_str(&fmt_f64(f)),
            _ => out.push_str(&n.to_string()),
        },
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                pad(depth + 1, out);
                emit(x, depth + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(depth + 1, out);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                emit(&m[*k], depth + 1, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(depth, out);
            out.push('}');
        }
    }
}
