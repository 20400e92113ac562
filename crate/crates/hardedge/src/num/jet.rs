//! First-order jets (dual numbers) carrying a value and its derivative with
//! respect to one scalar parameter (here always `t`).
//!
//! The Lax-pair assemblies need analytic t-derivatives of matrix entries that
//! are built from solution data (q, y, phi, ...) whose own t-derivatives are
//! known from the governing ODE right-hand sides. Evaluating the entry
//! formulas over jets propagates those derivatives exactly through products,
//! quotients, and powers, so residual thresholds are not polluted by
//! finite-difference truncation.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value and first derivative of a scalar quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    /// The value.
    pub v: f64,
    /// The derivative with respect to the jet parameter.
    pub d: f64,
}

impl Jet {
    /// A quantity with known value and derivative.
    pub fn new(v: f64, d: f64) -> Self {
        Jet { v, d }
    }

    /// A constant (zero derivative).
    pub fn con(v: f64) -> Self {
        Jet { v, d: 0.0 }
    }

    /// The jet of the parameter itself (derivative one).
    pub fn var(v: f64) -> Self {
        Jet { v, d: 1.0 }
    }

    /// Integer power.
    pub fn powi(self, n: i32) -> Self {
        let v = self.v.powi(n);
        Jet {
            v,
            d: f64::from(n) * self.v.powi(n - 1) * self.d,
        }
    }

    /// Reciprocal.
    pub fn recip(self) -> Self {
        Jet {
            v: 1.0 / self.v,
            d: -self.d / (self.v * self.v),
        }
    }

    /// Natural exponential.
    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Jet { v: e, d: e * self.d }
    }

    /// Square root.
    pub fn sqrt(self) -> Self {
        let r = self.v.sqrt();
        Jet {
            v: r,
            d: self.d / (2.0 * r),
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet::new(self.v + rhs.v, self.d + rhs.d)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        Jet::new(self.v - rhs.v, self.d - rhs.d)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        Jet::new(self.v * rhs.v, self.v * rhs.d + self.d * rhs.v)
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        Jet::new(
            self.v / rhs.v,
            (self.d * rhs.v - self.v * rhs.d) / (rhs.v * rhs.v),
        )
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.v, -self.d)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        Jet::new(self.v * rhs, self.d * rhs)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        Jet::new(self.v / rhs, self.d / rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        Jet::new(self.v + rhs, self.d)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        Jet::new(self.v - rhs, self.d)
    }
}
