//! Truncated Taylor arithmetic.
//!
//! Coefficients are stored divided: `c[i] = f^(i)(t) / i!`. [`Series`] has no
//! order limit and backs the Frobenius solver; [`Jet`] is the order-capped value
//! handed around by the geometry modules.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Denominators smaller than this are treated as poles.
pub const POLE_EPS: f64 = 1e-12;

/// Truncated power series `sum c[k] (s - t)^k`, `k = 0..=order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    c: Vec<f64>,
}

impl Series {
    pub fn constant(v: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = v;
        Series { c }
    }

    /// The identity function expanded at `t`.
    pub fn variable(t: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = t;
        if order > 0 {
            c[1] = 1.0;
        }
        Series { c }
    }

    pub fn from_coeffs(c: Vec<f64>) -> Self {
        assert!(!c.is_empty(), "series needs at least one coefficient");
        Series { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.c.get(k).copied().unwrap_or(0.0)
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn truncate(&self, order: usize) -> Series {
        let n = order.min(self.order()) + 1;
        Series {
            c: self.c[..n].to_vec(),
        }
    }

    /// d/ds, one order lower. An order-0 series differentiates to the zero constant.
    pub fn derivative(&self) -> Series {
        if self.c.len() == 1 {
            return Series::constant(0.0, 0);
        }
        Series {
            c: (1..self.c.len()).map(|k| k as f64 * self.c[k]).collect(),
        }
    }

    /// Antiderivative with constant term `c0`, one order higher.
    pub fn integral(&self, c0: f64) -> Series {
        let mut c = Vec::with_capacity(self.c.len() + 1);
        c.push(c0);
        c.extend(self.c.iter().enumerate().map(|(k, v)| v / (k + 1) as f64));
        Series { c }
    }

    /// Evaluate the polynomial at offset `ds` from the expansion point.
    pub fn eval_offset(&self, ds: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, &v| acc * ds + v)
    }

    pub fn scale(&self, k: f64) -> Series {
        Series {
            c: self.c.iter().map(|v| v * k).collect(),
        }
    }

    pub fn add_const(&self, k: f64) -> Series {
        let mut c = self.c.clone();
        c[0] += k;
        Series { c }
    }

    pub fn is_constant(&self) -> bool {
        self.c[1..].iter().all(|&v| v == 0.0)
    }

    fn zip_order(&self, o: &Series) -> usize {
        self.c.len().min(o.c.len())
    }

    pub fn mul(&self, o: &Series) -> Series {
        let n = self.zip_order(o);
        let c = (0..n)
            .map(|k| (0..=k).map(|j| self.c[j] * o.c[k - j]).sum())
            .collect();
        Series { c }
    }

    /// Quotient; `op` names the operation in the domain error.
    pub fn div_checked(&self, o: &Series, op: &'static str, t: f64) -> Result<Series> {
        if o.c[0].abs() <= POLE_EPS || !o.c[0].is_finite() {
            return Err(Error::Domain { op, t });
        }
        Ok(self.div_unchecked(o))
    }

    pub fn div_unchecked(&self, o: &Series) -> Series {
        let n = self.zip_order(o);
        let mut q = vec![0.0; n];
        for k in 0..n {
            let s: f64 = (1..=k).map(|j| o.c[j] * q[k - j]).sum();
            q[k] = (self.c[k] - s) / o.c[0];
        }
        Series { c: q }
    }

    pub fn recip(&self, t: f64) -> Result<Series> {
        Series::constant(1.0, self.order()).div_checked(self, "division", t)
    }

    pub fn exp(&self) -> Series {
        let n = self.c.len();
        let mut e = vec![0.0; n];
        e[0] = self.c[0].exp();
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| j as f64 * self.c[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Series { c: e }
    }

    pub fn ln(&self, t: f64) -> Result<Series> {
        let a0 = self.c[0];
        if a0 <= 0.0 || !a0.is_finite() {
            return Err(Error::Domain { op: "log", t });
        }
        let n = self.c.len();
        let mut l = vec![0.0; n];
        l[0] = a0.ln();
        for k in 1..n {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * self.c[k - j]).sum();
            l[k] = (self.c[k] - s / k as f64) / a0;
        }
        Ok(Series { c: l })
    }

    /// sin and cos together; they share one recurrence.
    pub fn sin_cos(&self) -> (Series, Series) {
        let n = self.c.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for k in 1..n {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.c[j];
                ds += w * c[k - j];
                dc -= w * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = dc / k as f64;
        }
        (Series { c: s }, Series { c })
    }

    pub fn sinh_cosh(&self) -> (Series, Series) {
        let n = self.c.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.c[0].sinh();
        c[0] = self.c[0].cosh();
        for k in 1..n {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.c[j];
                ds += w * c[k - j];
                dc += w * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = dc / k as f64;
        }
        (Series { c: s }, Series { c })
    }

    pub fn sqrt(&self, t: f64) -> Result<Series> {
        let a0 = self.c[0];
        let n = self.c.len();
        if a0 < 0.0 || !a0.is_finite() || (a0 == 0.0 && n > 1) {
            return Err(Error::Domain { op: "sqrt", t });
        }
        let mut r = vec![0.0; n];
        r[0] = a0.sqrt();
        for k in 1..n {
            let s: f64 = (1..k).map(|j| r[j] * r[k - j]).sum();
            r[k] = (self.c[k] - s) / (2.0 * r[0]);
        }
        Ok(Series { c: r })
    }

    pub fn atan(&self) -> Series {
        if self.c.len() == 1 {
            return Series::constant(self.c[0].atan(), 0);
        }
        let den = Series::constant(1.0, self.order()).add(&self.mul(self));
        // 1 + u^2 >= 1, never a pole.
        let d = self.derivative().div_unchecked(&den);
        d.integral(self.c[0].atan())
    }

    pub fn powi(&self, n: i64, t: f64) -> Result<Series> {
        if n < 0 {
            return self.powi(-n, t)?.recip(t);
        }
        let mut result = Series::constant(1.0, self.order());
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result)
    }

    /// `self ^ p` for a general exponent series.
    pub fn pow(&self, p: &Series, t: f64) -> Result<Series> {
        let p0 = p.c[0];
        if p.is_constant() && p0.fract() == 0.0 && p0.abs() <= 1024.0 {
            return self.powi(p0 as i64, t);
        }
        if self.c[0] <= 0.0 {
            return Err(Error::Domain { op: "pow", t });
        }
        Ok(p.mul(&self.ln(t)?).exp())
    }

    pub fn add(&self, o: &Series) -> Series {
        let n = self.zip_order(o);
        Series {
            c: (0..n).map(|k| self.c[k] + o.c[k]).collect(),
        }
    }

    pub fn sub(&self, o: &Series) -> Series {
        let n = self.zip_order(o);
        Series {
            c: (0..n).map(|k| self.c[k] - o.c[k]).collect(),
        }
    }

    pub fn neg(&self) -> Series {
        self.scale(-1.0)
    }

    /// Drop `m` leading coefficients (division by `(s - t)^m`).
    pub fn shift_down(&self, m: usize) -> Series {
        assert!(m < self.c.len());
        Series {
            c: self.c[m..].to_vec(),
        }
    }
}

/// Taylor jet of a scalar function at a base point, order at most [`Jet::MAX_ORDER`].
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    t: f64,
    s: Series,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl Jet {
    pub const MAX_ORDER: usize = 5;

    pub fn from_series(t: f64, s: Series) -> Jet {
        assert!(
            s.order() <= Self::MAX_ORDER,
            "jet order {} exceeds {}",
            s.order(),
            Self::MAX_ORDER
        );
        Jet { t, s }
    }

    pub fn constant(t: f64, v: f64, order: usize) -> Jet {
        Jet::from_series(t, Series::constant(v, order))
    }

    pub fn variable(t: f64, order: usize) -> Jet {
        Jet::from_series(t, Series::variable(t, order))
    }

    /// Build from raw derivatives `f(t), f'(t), f''(t), ...`.
    pub fn from_derivatives(t: f64, d: &[f64]) -> Jet {
        let c = d
            .iter()
            .enumerate()
            .map(|(i, v)| v / factorial(i))
            .collect();
        Jet::from_series(t, Series::from_coeffs(c))
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn order(&self) -> usize {
        self.s.order()
    }

    pub fn series(&self) -> &Series {
        &self.s
    }

    pub fn coeffs(&self) -> &[f64] {
        self.s.coeffs()
    }

    pub fn value(&self) -> f64 {
        self.s.value()
    }

    /// `f^(i)(t) = i! c_i`; zero beyond the stored order.
    pub fn derivative(&self, i: usize) -> f64 {
        factorial(i) * self.s.coeff(i)
    }

    pub fn derivatives(&self) -> Vec<f64> {
        (0..=self.order()).map(|i| self.derivative(i)).collect()
    }

    /// The jet of `f'`.
    pub fn differentiate(&self) -> Jet {
        Jet {
            t: self.t,
            s: self.s.derivative(),
        }
    }

    /// The jet of the antiderivative taking value `c0` at `t`, truncated to `order`.
    pub fn integrate(&self, c0: f64, order: usize) -> Jet {
        Jet {
            t: self.t,
            s: self.s.integral(c0).truncate(order.min(Self::MAX_ORDER)),
        }
    }

    pub fn truncate(&self, order: usize) -> Jet {
        Jet {
            t: self.t,
            s: self.s.truncate(order),
        }
    }

    fn wrap(&self, s: Series) -> Jet {
        Jet { t: self.t, s }
    }

    pub fn scale(&self, k: f64) -> Jet {
        self.wrap(self.s.scale(k))
    }

    pub fn add_const(&self, k: f64) -> Jet {
        self.wrap(self.s.add_const(k))
    }

    pub fn checked_div(&self, o: &Jet) -> Result<Jet> {
        Ok(self.wrap(self.s.div_checked(&o.s, "division", self.t)?))
    }

    pub fn recip(&self) -> Result<Jet> {
        Ok(self.wrap(self.s.recip(self.t)?))
    }

    pub fn sin(&self) -> Jet {
        self.wrap(self.s.sin_cos().0)
    }

    pub fn cos(&self) -> Jet {
        self.wrap(self.s.sin_cos().1)
    }

    pub fn tan(&self) -> Result<Jet> {
        let (s, c) = self.s.sin_cos();
        Ok(self.wrap(s.div_checked(&c, "tan", self.t)?))
    }

    pub fn cot(&self) -> Result<Jet> {
        let (s, c) = self.s.sin_cos();
        Ok(self.wrap(c.div_checked(&s, "cot", self.t)?))
    }

    pub fn exp(&self) -> Jet {
        self.wrap(self.s.exp())
    }

    pub fn ln(&self) -> Result<Jet> {
        Ok(self.wrap(self.s.ln(self.t)?))
    }

    pub fn sqrt(&self) -> Result<Jet> {
        Ok(self.wrap(self.s.sqrt(self.t)?))
    }

    pub fn sinh(&self) -> Jet {
        self.wrap(self.s.sinh_cosh().0)
    }

    pub fn cosh(&self) -> Jet {
        self.wrap(self.s.sinh_cosh().1)
    }

    pub fn atan(&self) -> Jet {
        self.wrap(self.s.atan())
    }

    pub fn powi(&self, n: i64) -> Result<Jet> {
        Ok(self.wrap(self.s.powi(n, self.t)?))
    }

    pub fn powf(&self, p: f64) -> Result<Jet> {
        let ps = Series::constant(p, self.order());
        Ok(self.wrap(self.s.pow(&ps, self.t)?))
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, o: &Jet) -> Jet {
        self.wrap(self.s.add(&o.s))
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, o: &Jet) -> Jet {
        self.wrap(self.s.sub(&o.s))
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, o: &Jet) -> Jet {
        self.wrap(self.s.mul(&o.s))
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.wrap(self.s.neg())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, o: Jet) -> Jet {
                (&self).$m(&o)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, o: &Jet) -> Jet {
                (&self).$m(o)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, o: Jet) -> Jet {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        (&self).neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exp_series_at_zero() {
        let x = Jet::variable(0.0, 5);
        let e = x.exp();
        let want = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0, 1.0 / 120.0];
        for (c, w) in e.coeffs().iter().zip(want) {
            assert_relative_eq!(*c, w, epsilon = 1e-15);
        }
    }

    #[test]
    fn sin_cos_derivatives() {
        let t = 0.7;
        let x = Jet::variable(t, 5);
        let s = x.sin();
        let want = [t.sin(), t.cos(), -t.sin(), -t.cos(), t.sin(), t.cos()];
        for (i, w) in want.iter().enumerate() {
            assert_relative_eq!(s.derivative(i), *w, epsilon = 1e-13);
        }
    }

    #[test]
    fn ln_one_plus_x() {
        let x = Jet::variable(0.0, 4).add_const(1.0);
        let l = x.ln().unwrap();
        let want = [0.0, 1.0, -0.5, 1.0 / 3.0, -0.25];
        for (c, w) in l.coeffs().iter().zip(want) {
            assert_relative_eq!(*c, w, epsilon = 1e-15);
        }
    }

    #[test]
    fn geometric_series() {
        let one = Jet::constant(0.0, 1.0, 5);
        let x = Jet::variable(0.0, 5);
        let g = one.checked_div(&(&one - &x)).unwrap();
        for c in g.coeffs() {
            assert_relative_eq!(*c, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn sqrt_squares_back() {
        let x = Jet::variable(2.3, 5);
        let u = (&x * &x).add_const(1.0);
        let r = u.sqrt().unwrap();
        let back = &r * &r;
        for (a, b) in back.coeffs().iter().zip(u.coeffs()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-12);
        }
    }

    #[test]
    fn atan_derivative() {
        let t = 0.5;
        let a = Jet::variable(t, 3).atan();
        assert_relative_eq!(a.value(), t.atan(), epsilon = 1e-15);
        assert_relative_eq!(a.derivative(1), 1.0 / (1.0 + t * t), epsilon = 1e-15);
        let d2 = -2.0 * t / (1.0 + t * t).powi(2);
        assert_relative_eq!(a.derivative(2), d2, epsilon = 1e-14);
    }

    #[test]
    fn sinh_cosh_identity() {
        let x = Jet::variable(0.4, 5).scale(1.7);
        let ch = x.cosh();
        let sh = x.sinh();
        let one = &ch * &ch - &sh * &sh;
        assert_relative_eq!(one.value(), 1.0, epsilon = 1e-14);
        for c in &one.coeffs()[1..] {
            assert!(c.abs() < 1e-13);
        }
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = Jet::variable(1.3, 5);
        let p = x.powi(3).unwrap();
        let q = &(&x * &x) * &x;
        assert_eq!(p.coeffs().len(), q.coeffs().len());
        for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-14);
        }
        let inv = x.powi(-2).unwrap();
        assert_relative_eq!(inv.derivative(1), -2.0 / 1.3f64.powi(3), epsilon = 1e-14);
    }

    #[test]
    fn poles_and_branches_are_domain_errors() {
        let z = Jet::variable(0.0, 2);
        assert!(z.cot().is_err());
        assert!(z.ln().is_err());
        assert!(z.sqrt().is_err());
        assert!(Jet::constant(0.0, -1.0, 0).sqrt().is_err());
        assert!(Jet::constant(0.0, 0.0, 0).sqrt().is_ok());
        assert!(z.powf(0.5).is_err());
    }

    #[test]
    fn integrate_then_differentiate() {
        let x = Jet::variable(0.9, 4).cos();
        let i = x.integrate(2.0, 5);
        assert_eq!(i.order(), 5);
        assert_eq!(i.value(), 2.0);
        let d = i.differentiate();
        for (a, b) in d.coeffs().iter().zip(x.coeffs()) {
            assert_relative_eq!(*a, *b, epsilon = 1e-15);
        }
    }

    #[test]
    fn series_shift_and_eval() {
        let s = Series::from_coeffs(vec![0.0, 0.0, 3.0, 1.0]);
        assert_eq!(s.shift_down(2).coeffs(), &[3.0, 1.0]);
        assert_relative_eq!(s.eval_offset(2.0), 12.0 + 8.0);
    }
}
