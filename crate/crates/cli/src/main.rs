//! `frontal`: build Legendre-curve profiles, revolve them and analyse the
//! resulting frontals.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frontal::config::{parse_config, GridSpec};
use frontal::construct::{
    self, Construction, GaussRatioProblem, HPhiProblem, JPhiProblem, JkProblem, MeanRatioProblem,
    Sign,
};
use frontal::expr::{self, Expr};
use frontal::framed::{self, basic_invariants_of, integrability_residual};
use frontal::io::{self, Mesh};
use frontal::legendre::{self, Constants, ExprProfile, LegendreCurve};
use frontal::revolution::{self, revolve, Axis, DEFAULT_N_THETA};
use frontal::singular::{self, Classification, Label, ZeroOrder};
use frontal::{Error, Result};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "frontal",
    version,
    about = "Legendre curves, their surfaces of revolution and cusp singularities",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Curves given by other data.
    #[command(subcommand)]
    Curve(CurveCommand),
    /// Revolve a profile about an axis; writes the curve, the mesh and a report.
    Revolve {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value = "z")]
        axis: Axis,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Basic invariants and framed curvature of the revolute.
    Invariants {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value = "z")]
        axis: Axis,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Singularity type at a parameter.
    Classify(ClassifyArgs),
    /// Profiles with prescribed curvature.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Both evolutes of the z-axis revolute.
    Evolute {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Parallel profile and the commutation residual.
    Parallel {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Legendre, integrability and round-trip residuals.
    Check {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
enum CurveCommand {
    /// Rebuild a curve from its curvature `(ell, beta)`.
    FromCurvature {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand, Debug)]
enum ConstructCommand {
    /// Prescribed Gauss ratio `K/J = alpha`.
    Gauss(GaussArgs),
    /// Prescribed `J` and `K`.
    GaussJk(JkArgs),
    /// Prescribed mean ratio `H/J = alpha`.
    Mean(MeanArgs),
    /// Prescribed `J` and normal angle.
    JPhi(JPhiArgs),
    /// Prescribed `H` and normal angle.
    HPhi(HPhiArgs),
}

/// Where the profile comes from: expressions for `(x, z)` with `(a, b)` or
/// `phi`, a CSV table, or a curvature pair.
#[derive(Args, Debug, Clone)]
struct ProfileArgs {
    /// Parameter grid `min:max:count`.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<GridSpec>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Normal angle; `(a, b) = (cos phi, sin phi)`.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Table with columns t,x,z,a,b.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Angle of the normal at the grid's left end, with --ell/--beta.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    theta0: f64,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    z0: f64,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Output prefix; writes PREFIX.csv, PREFIX.obj and PREFIX.json as
    /// applicable. Without it the report goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_N_THETA)]
    n_theta: usize,
    /// Zero-test tolerance; defaults depend on whether jets are exact.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Profile,
    Mean,
    Gauss,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    t0: f64,
    #[arg(long, value_enum, default_value = "profile")]
    family: Family,
    /// Ratio function for the mean and gauss families; `--beta` is shared.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Value of sin phi at t0 for the gauss family.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    s0: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "+")]
    branch: Sign,
    #[command(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct Anchor {
    #[arg(long, allow_hyphen_values = true)]
    grid: GridSpec,
    /// Anchor parameter; defaults to the grid's left end.
    #[arg(long, allow_hyphen_values = true)]
    t0: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    z0: f64,
}

impl Anchor {
    fn t0(&self) -> f64 {
        self.t0.unwrap_or(self.grid.min)
    }
}

#[derive(Args, Debug)]
struct GaussArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    x0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    s0: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "+")]
    branch: Sign,
    #[command(flatten)]
    anchor: Anchor,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct JkArgs {
    #[arg(long = "J", allow_hyphen_values = true)]
    j: String,
    #[arg(long = "K", allow_hyphen_values = true)]
    k: String,
    #[arg(long, allow_hyphen_values = true)]
    x0: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    s0: f64,
    #[arg(long, allow_hyphen_values = true, default_value = "+")]
    branch: Sign,
    #[command(flatten)]
    anchor: Anchor,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct MeanArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    #[arg(long, allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, allow_hyphen_values = true)]
    c2: f64,
    #[command(flatten)]
    anchor: Anchor,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct JPhiArgs {
    #[arg(long = "J", allow_hyphen_values = true)]
    j: String,
    #[arg(long, allow_hyphen_values = true)]
    phi: String,
    #[arg(long, allow_hyphen_values = true)]
    x0: f64,
    #[command(flatten)]
    anchor: Anchor,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args, Debug)]
struct HPhiArgs {
    #[arg(long = "H", allow_hyphen_values = true)]
    h: String,
    #[arg(long, allow_hyphen_values = true)]
    phi: String,
    #[arg(long, allow_hyphen_values = true)]
    x0: f64,
    #[command(flatten)]
    anchor: Anchor,
    #[command(flatten)]
    out: OutArgs,
}

/// Artifacts of one run.
#[derive(Default)]
struct Artifacts {
    csv: Option<String>,
    mesh: Option<Mesh>,
    report: Value,
}

struct Failure {
    code: u8,
    diagnostic: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let input = e.is_input_error();
        Failure {
            code: if input { 1 } else { 2 },
            diagnostic: json!({
                "error": if input { "input" } else { "numerical" },
                "message": e.to_string(),
            }),
        }
    }
}

fn parse_expr(src: &str) -> Result<Expr> {
    expr::parse(src)
}

fn require<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::InvalidArgument(format!("missing --{flag}")))
}

fn need_grid(p: &ProfileArgs) -> Result<GridSpec> {
    p.grid
        .ok_or_else(|| Error::InvalidArgument("missing --grid".into()))
}

fn curvature_curve(p: &ProfileArgs) -> Result<LegendreCurve> {
    let ell = parse_expr(require(&p.ell, "ell")?)?;
    let beta = parse_expr(require(&p.beta, "beta")?)?;
    let k = Constants {
        theta0: p.theta0,
        x0: p.x0.unwrap_or(0.0),
        z0: p.z0,
    };
    legendre::reconstruct_from_curvature(&ell, &beta, &need_grid(p)?.grid()?, k)
}

fn load_profile(p: &ProfileArgs) -> Result<LegendreCurve> {
    if let Some(path) = &p.csv {
        if p.grid.is_some() {
            return Err(Error::InvalidArgument("--grid cannot be combined with --csv".into()));
        }
        let table = io::read_curve_csv(fs::File::open(path)?)?;
        let sp = table.into_profile()?;
        let grid = sp.grid();
        return LegendreCurve::sample(Arc::new(sp), grid);
    }
    if p.ell.is_some() && p.x.is_none() {
        return curvature_curve(p);
    }
    let x = parse_expr(require(&p.x, "x")?)?;
    let z = parse_expr(require(&p.z, "z")?)?;
    let model = match (&p.phi, &p.a, &p.b) {
        (Some(phi), None, None) => ExprProfile::with_angle(x, z, parse_expr(phi)?),
        (None, Some(a), Some(b)) => ExprProfile::new(x, z, parse_expr(a)?, parse_expr(b)?),
        _ => {
            return Err(Error::InvalidArgument(
                "give the normal as --a and --b, or as --phi".into(),
            ))
        }
    };
    LegendreCurve::from_exprs(model, need_grid(p)?.grid()?)
}

fn check_n_theta(out: &OutArgs) -> Result<()> {
    if out.n_theta < 8 {
        return Err(Error::InvalidArgument(format!(
            "--n-theta must be at least 8, got {}",
            out.n_theta
        )));
    }
    Ok(())
}

fn tol_for(out: &OutArgs, c: &LegendreCurve) -> Result<f64> {
    match out.tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => {
            Err(Error::InvalidArgument(format!("--tol must be positive, got {t}")))
        }
        Some(t) => Ok(t),
        None => Ok(singular::default_tol(c)),
    }
}

fn curve_summary(c: &LegendreCurve) -> Value {
    let g = c.grid();
    json!({
        "n_t": c.len(),
        "t_min": g.min(),
        "t_max": g.max(),
        "exact_jets": c.exact(),
    })
}

fn mesh_of(c: &LegendreCurve, axis: Axis, n_theta: usize) -> Result<(Mesh, Value)> {
    let s = revolve(c, axis, n_theta)?;
    let mesh = Mesh::from_surface(&s);
    let info = json!({
        "axis": axis,
        "n_theta": n_theta,
        "vertices": mesh.vertices.len(),
        "faces": mesh.faces.len(),
        "seam_gap": mesh.seam_gap(),
    });
    Ok((mesh, info))
}

fn from_curvature(profile: &ProfileArgs, out: &OutArgs) -> Result<Artifacts> {
    let c = curvature_curve(profile)?;
    let tol = tol_for(out, &c)?;
    let lr = legendre::verify_legendre(&c, tol);
    Ok(Artifacts {
        csv: Some(io::curve_csv_string(&c)?),
        mesh: None,
        report: json!({
            "command": "curve from-curvature",
            "curve": curve_summary(&c),
            "legendre": {
                "max_contact_residual": lr.max_contact_residual,
                "max_norm_residual": lr.max_norm_residual,
                "pass": lr.pass,
            },
        }),
    })
}

fn revolve_cmd(profile: &ProfileArgs, axis: Axis, out: &OutArgs) -> Result<Artifacts> {
    check_n_theta(out)?;
    let c = load_profile(profile)?;
    let tol = tol_for(out, &c)?;
    let s = revolve(&c, axis, out.n_theta)?;
    let realized = integrability_residual(&basic_invariants_of(&s.surface)?)?;
    let (mesh, info) = mesh_of(&c, axis, out.n_theta)?;
    Ok(Artifacts {
        csv: Some(io::curve_csv_string(&c)?),
        report: json!({
            "command": "revolve",
            "curve": curve_summary(&c),
            "mesh": info,
            "front_status": revolution::frontal_front_status(&c, tol),
            "flat": revolution::flat_classification(&c, tol),
            "integrability": realized,
            "curvature": revolution::revolution_curvature(&c, axis),
        }),
        mesh: Some(mesh),
    })
}

fn invariants_cmd(profile: &ProfileArgs, axis: Axis, out: &OutArgs) -> Result<Artifacts> {
    check_n_theta(out)?;
    let c = load_profile(profile)?;
    let tol = tol_for(out, &c)?;
    let s = revolve(&c, axis, out.n_theta)?;
    let inv = basic_invariants_of(&s.surface)?;
    let fc = framed::curvature_of(&inv);
    let ts = c.grid().points();
    // Invariants do not depend on θ; one column describes the surface.
    let nodes: Vec<Value> = (0..s.n_t())
        .map(|i| {
            let k = s.surface.index(i, 0);
            json!({
                "t": ts[i],
                "invariants": inv.values[k],
                "curvature": fc.nodes[k],
                "immersion": framed::immersion_status(&fc, k, tol),
                "focal_radii": framed::focal_radii(&fc, k, tol),
            })
        })
        .collect();
    Ok(Artifacts {
        csv: None,
        mesh: None,
        report: json!({
            "command": "invariants",
            "axis": axis,
            "curve": curve_summary(&c),
            "integrability": integrability_residual(&inv)?,
            "nodes": nodes,
        }),
    })
}

fn classification(t0: f64, l: singular::CuspLabel) -> Result<Value> {
    Ok(serde_json::to_value(Classification { t0, label: l })?)
}

fn ord_value(o: ZeroOrder) -> Value {
    match o {
        ZeroOrder::NoZero => json!(0),
        ZeroOrder::Order(k) => json!(k),
        ZeroOrder::AtLeast(k) => json!(format!(">={k}")),
    }
}

fn classify_cmd(a: &ClassifyArgs) -> Result<Artifacts> {
    let t0 = a.t0;
    let report = match a.family {
        Family::Profile => {
            let c = load_profile(&a.profile)?;
            let tol = tol_for(&a.out, &c)?;
            let p = c.jets_at(t0, 5)?;
            let mut v = classification(t0, singular::revolution_singularity_classify(&c, t0, tol)?)?;
            v["profile"] = json!({
                "derivative_criterion": singular::classify_point_derivatives(&p, tol),
                "curvature_criterion": singular::classify_point_curvature(&p, tol),
            });
            v
        }
        Family::Mean => {
            let alpha = parse_expr(require(&a.alpha, "alpha")?)?;
            let beta = parse_expr(require(&a.profile.beta, "beta")?)?;
            let tol = a.out.tol.unwrap_or(singular::EXACT_TOL);
            let l = singular::constant_mean_cusp(
                &expr::eval_jet(&alpha, t0, 5)?,
                &expr::eval_jet(&beta, t0, 5)?,
                tol,
            );
            classification(t0, l)?
        }
        Family::Gauss => {
            let alpha = parse_expr(require(&a.alpha, "alpha")?)?;
            let beta = parse_expr(require(&a.profile.beta, "beta")?)?;
            let grid = need_grid(&a.profile)?.grid()?;
            let x0 = a.profile.x0.unwrap_or(1.0);
            let problem = GaussRatioProblem {
                alpha: alpha.clone(),
                beta: beta.clone(),
                t0,
                x0,
                s0: a.s0,
                z0: a.profile.z0,
                branch: a.branch,
            };
            let con = construct::profile_from_gauss_ratio(&problem, &grid)?;
            let tol = tol_for(&a.out, &con.curve)?;
            let aj = con.curve.jets_at(t0, 5)?.a;
            let bj = expr::eval_jet(&beta, t0, 5)?;
            let (oa, ob) = (singular::ord_of(&aj, 5, tol), singular::ord_of(&bj, 5, tol));
            let front = singular::gauss_front_status(&aj, &bj, expr::eval(&alpha, t0)?, x0, tol)?;
            let l = match (oa, ob) {
                (ZeroOrder::Order(m), ZeroOrder::Order(n)) => singular::constant_gauss_cusp(m, n)?,
                (ZeroOrder::NoZero, _) | (_, ZeroOrder::NoZero) => singular::CuspLabel {
                    label: Label::Regular,
                    ..singular::CuspLabel::new("constant_gauss")
                },
                _ => singular::CuspLabel::new("constant_gauss"),
            };
            let mut v = classification(t0, l)?;
            v["front_status"] = serde_json::to_value(front)?;
            v["orders"] = json!({ "a": ord_value(oa), "beta": ord_value(ob) });
            v
        }
    };
    Ok(Artifacts {
        csv: None,
        mesh: None,
        report: json!({ "command": "classify", "classification": report }),
    })
}

fn construction(kind: &str, con: Construction, out: &OutArgs) -> Result<Artifacts> {
    check_n_theta(out)?;
    let c = &con.curve;
    let (mesh, info) = mesh_of(c, Axis::Z, out.n_theta)?;
    let curv = revolution::revolution_curvature(c, Axis::Z);
    let ratio = |num: fn(&revolution::RevolutionCurvature) -> f64| -> Value {
        let r: Vec<f64> = curv
            .iter()
            .filter(|n| n.j.abs() > 1e-3)
            .map(|n| num(n) / n.j)
            .collect();
        if r.is_empty() {
            Value::Null
        } else {
            json!({
                "min": r.iter().copied().fold(f64::INFINITY, f64::min),
                "max": r.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            })
        }
    };
    Ok(Artifacts {
        csv: Some(io::curve_csv_string(c)?),
        report: json!({
            "command": format!("construct {kind}"),
            "curve": curve_summary(c),
            "mesh": info,
            "construction": con.report,
            "k_over_j": ratio(|n| n.k),
            "h_over_j": ratio(|n| n.h),
        }),
        mesh: Some(mesh),
    })
}

fn construct_cmd(cmd: &ConstructCommand) -> Result<Artifacts> {
    match cmd {
        ConstructCommand::Gauss(a) => {
            let p = GaussRatioProblem {
                alpha: parse_expr(&a.alpha)?,
                beta: parse_expr(&a.beta)?,
                t0: a.anchor.t0(),
                x0: a.x0,
                s0: a.s0,
                z0: a.anchor.z0,
                branch: a.branch,
            };
            let con = construct::profile_from_gauss_ratio(&p, &a.anchor.grid.grid()?)?;
            construction("gauss", con, &a.out)
        }
        ConstructCommand::GaussJk(a) => {
            let p = JkProblem {
                j: parse_expr(&a.j)?,
                k: parse_expr(&a.k)?,
                t0: a.anchor.t0(),
                x0: a.x0,
                s0: a.s0,
                z0: a.anchor.z0,
                branch: a.branch,
            };
            let con = construct::profile_from_jk(&p, &a.anchor.grid.grid()?)?;
            construction("gauss-jk", con, &a.out)
        }
        ConstructCommand::Mean(a) => {
            let p = MeanRatioProblem {
                alpha: parse_expr(&a.alpha)?,
                beta: parse_expr(&a.beta)?,
                c1: a.c1,
                c2: a.c2,
                t0: a.anchor.t0(),
                z0: a.anchor.z0,
            };
            let con = construct::profile_from_mean_ratio(&p, &a.anchor.grid.grid()?)?;
            construction("mean", con, &a.out)
        }
        ConstructCommand::JPhi(a) => {
            let p = JPhiProblem {
                j: parse_expr(&a.j)?,
                phi: parse_expr(&a.phi)?,
                t0: a.anchor.t0(),
                x0: a.x0,
                z0: a.anchor.z0,
            };
            let con = construct::profile_from_j_phi(&p, &a.anchor.grid.grid()?)?;
            construction("j-phi", con, &a.out)
        }
        ConstructCommand::HPhi(a) => {
            let p = HPhiProblem {
                h: parse_expr(&a.h)?,
                phi: parse_expr(&a.phi)?,
                t0: a.anchor.t0(),
                x0: a.x0,
                z0: a.anchor.z0,
            };
            let con = construct::profile_from_h_phi(&p, &a.anchor.grid.grid()?)?;
            construction("h-phi", con, &a.out)
        }
    }
}

fn evolute_cmd(profile: &ProfileArgs, out: &OutArgs) -> Result<Artifacts> {
    check_n_theta(out)?;
    let c = load_profile(profile)?;
    let ev = revolution::revolution_evolutes(&c, out.n_theta)?;
    let (csv, mesh) = match &ev.profile_evolute {
        Some(s) => (Some(io::curve_csv_string(&s.profile)?), Some(Mesh::from_surface(s))),
        None => (None, None),
    };
    Ok(Artifacts {
        csv,
        mesh,
        report: json!({
            "command": "evolute",
            "curve": curve_summary(&c),
            "profile_evolute": ev.profile_evolute.is_some(),
            "axis_evolute": ev.axis_evolute,
            "axis_evolute_continuous": ev.axis_evolute.as_ref().map(|a| a.continuous()),
            "diagnostics": ev.diagnostics,
        }),
    })
}

fn parallel_cmd(profile: &ProfileArgs, lambda: f64, out: &OutArgs) -> Result<Artifacts> {
    check_n_theta(out)?;
    let c = load_profile(profile)?;
    let p = legendre::parallel_curve(&c, lambda)?;
    let mut law = 0.0f64;
    for i in 0..c.len() {
        let (l, b) = (c.curvature.ell[i].value(), c.curvature.beta[i].value());
        law = law.max((p.curvature.ell[i].value() - l).abs());
        law = law.max((p.curvature.beta[i].value() - b - lambda * l).abs());
    }
    let (mesh, info) = mesh_of(&p, Axis::Z, out.n_theta)?;
    Ok(Artifacts {
        csv: Some(io::curve_csv_string(&p)?),
        report: json!({
            "command": "parallel",
            "lambda": lambda,
            "curve": curve_summary(&p),
            "mesh": info,
            "curvature_law_residual": law,
            "commutation_residual": revolution::parallel_commutation_check(&c, lambda, out.n_theta)?,
        }),
        mesh: Some(mesh),
    })
}

fn check_cmd(profile: &ProfileArgs, out: &OutArgs) -> Result<(Artifacts, bool)> {
    check_n_theta(out)?;
    let c = load_profile(profile)?;
    let tol = tol_for(out, &c)?;
    let lr = legendre::verify_legendre(&c, tol);
    let mut integrability = serde_json::Map::new();
    let mut worst = 0.0f64;
    for axis in [Axis::Z, Axis::X] {
        let s = revolve(&c, axis, out.n_theta)?;
        let r = integrability_residual(&basic_invariants_of(&s.surface)?)?;
        worst = worst.max(r.max);
        integrability.insert(format!("{axis:?}").to_lowercase(), serde_json::to_value(r)?);
    }
    let round_trip = legendre::round_trip_residual(&c)?;
    let pass = lr.pass && worst <= tol && round_trip <= tol;
    let report = json!({
        "command": "check",
        "curve": curve_summary(&c),
        "tolerance": tol,
        "legendre": {
            "max_contact_residual": lr.max_contact_residual,
            "max_norm_residual": lr.max_norm_residual,
        },
        "integrability": integrability,
        "round_trip_residual": round_trip,
        "pass": pass,
    });
    Ok((
        Artifacts {
            csv: None,
            mesh: None,
            report,
        },
        pass,
    ))
}

fn with_suffix(prefix: &std::path::Path, ext: &str) -> PathBuf {
    let mut s = OsString::from(prefix.as_os_str());
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn emit(a: &Artifacts, out: &OutArgs) -> Result<()> {
    let json = io::to_json(&a.report)?;
    let Some(prefix) = &out.out else {
        print!("{json}");
        return Ok(());
    };
    if let Some(csv) = &a.csv {
        fs::write(with_suffix(prefix, "csv"), csv)?;
    }
    if let Some(m) = &a.mesh {
        let mut buf = Vec::new();
        m.write_obj(&mut buf)?;
        fs::write(with_suffix(prefix, "obj"), buf)?;
    }
    fs::write(with_suffix(prefix, "json"), json)?;
    Ok(())
}

fn out_args(cmd: &Command) -> &OutArgs {
    match cmd {
        Command::Curve(CurveCommand::FromCurvature { out, .. })
        | Command::Revolve { out, .. }
        | Command::Invariants { out, .. }
        | Command::Evolute { out, .. }
        | Command::Parallel { out, .. }
        | Command::Check { out, .. } => out,
        Command::Classify(a) => &a.out,
        Command::Construct(c) => match c {
            ConstructCommand::Gauss(a) => &a.out,
            ConstructCommand::GaussJk(a) => &a.out,
            ConstructCommand::Mean(a) => &a.out,
            ConstructCommand::JPhi(a) => &a.out,
            ConstructCommand::HPhi(a) => &a.out,
        },
    }
}

fn run(cli: &Cli) -> std::result::Result<(), Failure> {
    let (artifacts, pass) = match &cli.command {
        Command::Curve(CurveCommand::FromCurvature { profile, out }) => (from_curvature(profile, out)?, true),
        Command::Revolve { profile, axis, out } => (revolve_cmd(profile, *axis, out)?, true),
        Command::Invariants { profile, axis, out } => (invariants_cmd(profile, *axis, out)?, true),
        Command::Classify(a) => (classify_cmd(a)?, true),
        Command::Construct(c) => (construct_cmd(c)?, true),
        Command::Evolute { profile, out } => (evolute_cmd(profile, out)?, true),
        Command::Parallel { profile, lambda, out } => (parallel_cmd(profile, *lambda, out)?, true),
        Command::Check { profile, out } => check_cmd(profile, out)?,
    };
    emit(&artifacts, out_args(&cli.command))?;
    if !pass {
        return Err(Failure {
            code: 2,
            diagnostic: json!({
                "error": "numerical",
                "message": "residual check failed",
            }),
        });
    }
    Ok(())
}

/// Number of leading tokens naming the subcommand.
fn command_depth(args: &[OsString]) -> usize {
    match args.get(1).and_then(|s| s.to_str()) {
        Some("curve" | "construct") => 3,
        _ => 2,
    }
}

/// Replace `--config FILE` by the file's flags, placed right after the
/// subcommand so that explicit flags override them.
fn expand_config(mut args: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut path = None;
    let mut i = 1;
    while i < args.len() {
        let a = args[i].to_string_lossy().into_owned();
        if a == "--config" {
            let v = args
                .get(i + 1)
                .ok_or_else(|| Error::InvalidArgument("--config needs a file".into()))?;
            path = Some(PathBuf::from(v));
            args.drain(i..i + 2);
        } else if let Some(v) = a.strip_prefix("--config=") {
            path = Some(PathBuf::from(v));
            args.remove(i);
        } else {
            i += 1;
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let cfg = parse_config(&fs::read_to_string(&path)?)?;
    let at = command_depth(&args).min(args.len());
    let tail = args.split_off(at);
    args.extend(cfg.to_args().into_iter().map(OsString::from));
    args.extend(tail);
    Ok(args)
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("{}", f.diagnostic);
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => return fail(e.into()),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => fail(f),
    }
}
