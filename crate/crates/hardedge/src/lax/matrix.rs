//! Dense 2x2 real matrices and the power-of-x coefficient structure shared by
//! all pair assemblies.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result, SINGULAR_BAND};
use crate::num::Jet;

/// A real 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Matrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Matrix2 {
    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Matrix2 { a11, a12, a21, a22 }
    }

    pub fn zero() -> Self {
        Matrix2::default()
    }

    pub fn identity() -> Self {
        Matrix2::new(1.0, 0.0, 0.0, 1.0)
    }

    /// Scalar multiple of the identity.
    pub fn scalar(s: f64) -> Self {
        Matrix2::new(s, 0.0, 0.0, s)
    }

    pub fn is_zero(&self) -> bool {
        self.a11 == 0.0 && self.a12 == 0.0 && self.a21 == 0.0 && self.a22 == 0.0
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Matrix2) -> Matrix2 {
        *self * *other - *other * *self
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Matrix2) -> Matrix2 {
        *self * *other + *other * *self
    }

    /// Largest absolute entry.
    pub fn norm_inf(&self) -> f64 {
        self.a11
            .abs()
            .max(self.a12.abs())
            .max(self.a21.abs())
            .max(self.a22.abs())
    }

    /// Largest absolute entry of the first row (the component that must
    /// vanish for a pair to carry a distribution function).
    pub fn top_row_norm(&self) -> f64 {
        self.a11.abs().max(self.a12.abs())
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, r: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 + r.a11,
            self.a12 + r.a12,
            self.a21 + r.a21,
            self.a22 + r.a22,
        )
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, r: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 - r.a11,
            self.a12 - r.a12,
            self.a21 - r.a21,
            self.a22 - r.a22,
        )
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, r: Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 * r.a11 + self.a12 * r.a21,
            self.a11 * r.a12 + self.a12 * r.a22,
            self.a21 * r.a11 + self.a22 * r.a21,
            self.a21 * r.a12 + self.a22 * r.a22,
        )
    }
}

impl Mul<f64> for Matrix2 {
    type Output = Matrix2;
    fn mul(self, s: f64) -> Matrix2 {
        Matrix2::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }
}

impl Mul<Matrix2> for f64 {
    type Output = Matrix2;
    fn mul(self, m: Matrix2) -> Matrix2 {
        m * self
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        self * -1.0
    }
}

/// Coefficient matrices of `L` and `B` organized by powers of `x`.
///
/// Slot `k` of each array holds the coefficient of `x^(k-2)`, so the five
/// slots cover `x^-2` through `x^2`. The hard-edge pairs populate
/// `L = L2/x^2 + L1/x + L0` and `B = B1 x + B0 + B(-1)/x`; the soft-edge
/// pairs are polynomial in `x` and populate the non-negative powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolePowers {
    pub l: [Matrix2; 5],
    pub b: [Matrix2; 5],
}

/// Evaluate `sum_k c[k] x^(k-2)`, skipping zero slots so that `x = 0` is
/// legal whenever no negative power is present.
fn powers_at(c: &[Matrix2; 5], x: f64) -> Result<Matrix2> {
    if !c[0].is_zero() || !c[1].is_zero() {
        Error::guard_nonzero("x", x, SINGULAR_BAND)?;
    }
    let mut m = c[2];
    if !c[0].is_zero() {
        m = m + c[0] * (1.0 / (x * x));
    }
    if !c[1].is_zero() {
        m = m + c[1] * (1.0 / x);
    }
    if !c[3].is_zero() {
        m = m + c[3] * x;
    }
    if !c[4].is_zero() {
        m = m + c[4] * (x * x);
    }
    Ok(m)
}

/// Evaluate `d/dx sum_k c[k] x^(k-2)`.
fn powers_dx(c: &[Matrix2; 5], x: f64) -> Result<Matrix2> {
    if !c[0].is_zero() || !c[1].is_zero() {
        Error::guard_nonzero("x", x, SINGULAR_BAND)?;
    }
    let mut m = Matrix2::zero();
    if !c[0].is_zero() {
        m = m + c[0] * (-2.0 / (x * x * x));
    }
    if !c[1].is_zero() {
        m = m + c[1] * (-1.0 / (x * x));
    }
    if !c[3].is_zero() {
        m = m + c[3];
    }
    if !c[4].is_zero() {
        m = m + c[4] * (2.0 * x);
    }
    Ok(m)
}

impl PolePowers {
    pub fn zero() -> Self {
        PolePowers {
            l: [Matrix2::zero(); 5],
            b: [Matrix2::zero(); 5],
        }
    }

    /// `L(x)` reconstructed from the coefficients.
    pub fn l_at(&self, x: f64) -> Result<Matrix2> {
        powers_at(&self.l, x)
    }

    /// `B(x)` reconstructed from the coefficients.
    pub fn b_at(&self, x: f64) -> Result<Matrix2> {
        powers_at(&self.b, x)
    }

    /// `dL/dx`.
    pub fn l_dx(&self, x: f64) -> Result<Matrix2> {
        powers_dx(&self.l, x)
    }

    /// `dB/dx`.
    pub fn b_dx(&self, x: f64) -> Result<Matrix2> {
        powers_dx(&self.b, x)
    }

    /// Coefficient of `x^-2` in `L`.
    pub fn l2(&self) -> Matrix2 {
        self.l[0]
    }

    /// Coefficient of `x^-1` in `L`.
    pub fn l1(&self) -> Matrix2 {
        self.l[1]
    }

    /// Coefficient of `x^0` in `L`.
    pub fn l0(&self) -> Matrix2 {
        self.l[2]
    }

    /// Coefficient of `x` in `B`.
    pub fn b1(&self) -> Matrix2 {
        self.b[3]
    }

    /// Coefficient of `x^0` in `B`.
    pub fn b0(&self) -> Matrix2 {
        self.b[2]
    }

    /// Coefficient of `x^-1` in `B`.
    pub fn bm1(&self) -> Matrix2 {
        self.b[1]
    }
}

/// A 2x2 matrix of jets: entry values together with their t-derivatives.
#[derive(Debug, Clone, Copy)]
pub(super) struct JetMat {
    pub a11: Jet,
    pub a12: Jet,
    pub a21: Jet,
    pub a22: Jet,
}

impl JetMat {
    pub fn new(a11: Jet, a12: Jet, a21: Jet, a22: Jet) -> Self {
        JetMat { a11, a12, a21, a22 }
    }

    pub fn zero() -> Self {
        let z = Jet::con(0.0);
        JetMat::new(z, z, z, z)
    }

    /// Scalar-jet multiple of the identity.
    pub fn scalar(s: Jet) -> Self {
        let z = Jet::con(0.0);
        JetMat::new(s, z, z, s)
    }

    pub fn value(&self) -> Matrix2 {
        Matrix2::new(self.a11.v, self.a12.v, self.a21.v, self.a22.v)
    }

    pub fn deriv(&self) -> Matrix2 {
        Matrix2::new(self.a11.d, self.a12.d, self.a21.d, self.a22.d)
    }
}

/// Jet-valued pole coefficients; splitting yields the value coefficients and
/// their exact t-derivatives in one pass.
#[derive(Debug, Clone, Copy)]
pub(super) struct JetPoles {
    pub l: [JetMat; 5],
    pub b: [JetMat; 5],
}

impl JetPoles {
    pub fn zero() -> Self {
        JetPoles {
            l: [JetMat::zero(); 5],
            b: [JetMat::zero(); 5],
        }
    }

    pub fn split(&self) -> (PolePowers, PolePowers) {
        let mut value = PolePowers::zero();
        let mut deriv = PolePowers::zero();
        for k in 0..5 {
            value.l[k] = self.l[k].value();
            value.b[k] = self.b[k].value();
            deriv.l[k] = self.l[k].deriv();
            deriv.b[k] = self.b[k].deriv();
        }
        (value, deriv)
    }
}
