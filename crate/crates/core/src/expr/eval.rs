use super::{BinOp, Expr, Func};
use crate::error::{Error, Result};
use crate::jet::{Jet, Series, POLE_EPS};

/// Integer exponent of `a ^ e` when `e` is a `t`-free integer, so that negative
/// bases are allowed.
fn integer_exponent(e: &Expr) -> Option<i64> {
    if e.depends_on_t() {
        return None;
    }
    let v = eval(e, 0.0).ok()?;
    (v.fract() == 0.0 && v.abs() <= 1024.0).then_some(v as i64)
}

fn checked_div(n: f64, d: f64, op: &'static str, t: f64) -> Result<f64> {
    if d.abs() <= POLE_EPS || !d.is_finite() {
        return Err(Error::Domain { op, t });
    }
    Ok(n / d)
}

/// Plain value of `e` at `t` with the same domain rules as [`eval_jet`].
pub fn eval(e: &Expr, t: f64) -> Result<f64> {
    let v = match e {
        Expr::Num(v) => *v,
        Expr::Var => t,
        Expr::Neg(a) => -eval(a, t)?,
        Expr::Bin(op, l, r) => {
            let a = eval(l, t)?;
            match op {
                BinOp::Add => a + eval(r, t)?,
                BinOp::Sub => a - eval(r, t)?,
                BinOp::Mul => a * eval(r, t)?,
                BinOp::Div => checked_div(a, eval(r, t)?, "division", t)?,
                BinOp::Pow => match integer_exponent(r) {
                    Some(n) if n >= 0 => a.powi(n as i32),
                    Some(n) => checked_div(1.0, a.powi((-n) as i32), "division", t)?,
                    None => {
                        if a <= 0.0 {
                            return Err(Error::Domain { op: "pow", t });
                        }
                        a.powf(eval(r, t)?)
                    }
                },
            }
        }
        Expr::Call(f, a) => {
            let x = eval(a, t)?;
            match f {
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Tan => checked_div(x.sin(), x.cos(), "tan", t)?,
                Func::Cot => checked_div(x.cos(), x.sin(), "cot", t)?,
                Func::Exp => x.exp(),
                Func::Log => {
                    if x <= 0.0 {
                        return Err(Error::Domain { op: "log", t });
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(Error::Domain { op: "sqrt", t });
                    }
                    x.sqrt()
                }
                Func::Sinh => x.sinh(),
                Func::Cosh => x.cosh(),
                Func::Atan => x.atan(),
            }
        }
    };
    if !v.is_finite() {
        return Err(Error::Domain { op: "overflow", t });
    }
    Ok(v)
}

/// Taylor series of `e` at `t` to arbitrary order.
pub fn eval_series(e: &Expr, t: f64, order: usize) -> Result<Series> {
    let s = match e {
        Expr::Num(v) => Series::constant(*v, order),
        Expr::Var => Series::variable(t, order),
        Expr::Neg(a) => eval_series(a, t, order)?.neg(),
        Expr::Bin(op, l, r) => {
            let a = eval_series(l, t, order)?;
            match op {
                BinOp::Add => a.add(&eval_series(r, t, order)?),
                BinOp::Sub => a.sub(&eval_series(r, t, order)?),
                BinOp::Mul => a.mul(&eval_series(r, t, order)?),
                BinOp::Div => a.div_checked(&eval_series(r, t, order)?, "division", t)?,
                BinOp::Pow => match integer_exponent(r) {
                    Some(n) => a.powi(n, t)?,
                    None => a.pow(&eval_series(r, t, order)?, t)?,
                },
            }
        }
        Expr::Call(f, a) => {
            let x = eval_series(a, t, order)?;
            match f {
                Func::Sin => x.sin_cos().0,
                Func::Cos => x.sin_cos().1,
                Func::Tan => {
                    let (s, c) = x.sin_cos();
                    s.div_checked(&c, "tan", t)?
                }
                Func::Cot => {
                    let (s, c) = x.sin_cos();
                    c.div_checked(&s, "cot", t)?
                }
                Func::Exp => x.exp(),
                Func::Log => x.ln(t)?,
                Func::Sqrt => x.sqrt(t)?,
                Func::Sinh => x.sinh_cosh().0,
                Func::Cosh => x.sinh_cosh().1,
                Func::Atan => x.atan(),
            }
        }
    };
    if s.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain { op: "overflow", t });
    }
    Ok(s)
}

/// Jet of `e` at `t`; `order` is capped by [`Jet::MAX_ORDER`].
pub fn eval_jet(e: &Expr, t: f64, order: usize) -> Result<Jet> {
    if order > Jet::MAX_ORDER {
        return Err(Error::InvalidArgument(format!(
            "jet order {order} exceeds {}",
            Jet::MAX_ORDER
        )));
    }
    Ok(Jet::from_series(t, eval_series(e, t, order)?))
}
