//! Forward-mode derivatives in the two variables `(t, r)`.
//!
//! Closed-form profiles are written once, generically over [`Scalar`], and
//! evaluated either as plain `f64` or as a [`Jet`] carrying exact first and
//! second partial derivatives. No finite differences are involved.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic needed by the closed-form profiles.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    fn value(self) -> f64;
    fn powf(self, e: f64) -> Self;
    fn powi(self, n: i32) -> Self;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn value(self) -> f64 {
        self
    }
    fn powf(self, e: f64) -> Self {
        f64::powf(self, e)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

/// Value with exact first and second partials in `(t, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub v: f64,
    pub t: f64,
    pub r: f64,
    pub tt: f64,
    pub tr: f64,
    pub rr: f64,
}

impl Jet {
    pub fn var_t(t: f64) -> Self {
        Jet { v: t, t: 1.0, ..Default::default() }
    }

    pub fn var_r(r: f64) -> Self {
        Jet { v: r, r: 1.0, ..Default::default() }
    }

    /// Compose with a scalar function given its value and first two derivatives.
    fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Jet {
            v: f0,
            t: f1 * self.t,
            r: f1 * self.r,
            tt: f1 * self.tt + f2 * self.t * self.t,
            tr: f1 * self.tr + f2 * self.t * self.r,
            rr: f1 * self.rr + f2 * self.r * self.r,
        }
    }

    fn recip(self) -> Self {
        let x = self.v;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            t: self.t + o.t,
            r: self.r + o.r,
            tt: self.tt + o.tt,
            tr: self.tr + o.tr,
            rr: self.rr + o.rr,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, t: -self.t, r: -self.r, tt: -self.tt, tr: -self.tr, rr: -self.rr }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            t: self.t * o.v + self.v * o.t,
            r: self.r * o.v + self.v * o.r,
            tt: self.tt * o.v + 2.0 * self.t * o.t + self.v * o.tt,
            tr: self.tr * o.v + self.t * o.r + self.r * o.t + self.v * o.tr,
            rr: self.rr * o.v + 2.0 * self.r * o.r + self.v * o.rr,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, c: f64) -> Jet {
        self.v += c;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, c: f64) -> Jet {
        self.v -= c;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        Jet {
            v: self.v * c,
            t: self.t * c,
            r: self.r * c,
            tt: self.tt * c,
            tr: self.tr * c,
            rr: self.rr * c,
        }
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, c: f64) -> Jet {
        self * (1.0 / c)
    }
}

impl Scalar for Jet {
    fn cst(v: f64) -> Self {
        Jet { v, ..Default::default() }
    }
    fn value(self) -> f64 {
        self.v
    }
    fn powf(self, e: f64) -> Self {
        let x = self.v;
        self.chain(x.powf(e), e * x.powf(e - 1.0), e * (e - 1.0) * x.powf(e - 2.0))
    }
    fn powi(self, n: i32) -> Self {
        let x = self.v;
        let nf = n as f64;
        let d1 = if n == 0 { 0.0 } else { nf * x.powi(n - 1) };
        let d2 = if n <= 1 { 0.0 } else { nf * (nf - 1.0) * x.powi(n - 2) };
        self.chain(x.powi(n), d1, d2)
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }
    fn sqrt(self) -> Self {
        let q = self.v.sqrt();
        self.chain(q, 0.5 / q, -0.25 / (q * self.v))
    }
}

/// First-order dual number in `(t, r)`; used to differentiate the
/// divergence-form brackets of the multiplier identity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dual {
    pub v: f64,
    pub t: f64,
    pub r: f64,
}

impl Dual {
    pub fn new(v: f64, t: f64, r: f64) -> Self {
        Dual { v, t, r }
    }

    /// `(∂t + ∂r)` of the carried quantity.
    pub fn d_plus(self) -> f64 {
        self.t + self.r
    }

    /// `(∂t − ∂r)` of the carried quantity.
    pub fn d_minus(self) -> f64 {
        self.t - self.r
    }

    fn chain(self, f0: f64, f1: f64) -> Self {
        Dual { v: f0, t: f1 * self.t, r: f1 * self.r }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual { v: self.v + o.v, t: self.t + o.t, r: self.r + o.r }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual { v: self.v - o.v, t: self.t - o.t, r: self.r - o.r }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual { v: -self.v, t: -self.t, r: -self.r }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            v: self.v * o.v,
            t: self.t * o.v + self.v * o.t,
            r: self.r * o.v + self.v * o.r,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        let inv = 1.0 / o.v;
        Dual {
            v: self.v * inv,
            t: (self.t * o.v - self.v * o.t) * inv * inv,
            r: (self.r * o.v - self.v * o.r) * inv * inv,
        }
    }
}

impl Add<f64> for Dual {
    type Output = Dual;
    fn add(mut self, c: f64) -> Dual {
        self.v += c;
        self
    }
}

impl Sub<f64> for Dual {
    type Output = Dual;
    fn sub(mut self, c: f64) -> Dual {
        self.v -= c;
        self
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, c: f64) -> Dual {
        Dual { v: self.v * c, t: self.t * c, r: self.r * c }
    }
}

impl Div<f64> for Dual {
    type Output = Dual;
    fn div(self, c: f64) -> Dual {
        self * (1.0 / c)
    }
}

impl Scalar for Dual {
    fn cst(v: f64) -> Self {
        Dual { v, t: 0.0, r: 0.0 }
    }
    fn value(self) -> f64 {
        self.v
    }
    fn powf(self, e: f64) -> Self {
        let x = self.v;
        self.chain(x.powf(e), e * x.powf(e - 1.0))
    }
    fn powi(self, n: i32) -> Self {
        let x = self.v;
        let d1 = if n == 0 { 0.0 } else { n as f64 * x.powi(n - 1) };
        self.chain(x.powi(n), d1)
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }
    fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }
    fn sqrt(self) -> Self {
        let q = self.v.sqrt();
        self.chain(q, 0.5 / q)
    }
}
