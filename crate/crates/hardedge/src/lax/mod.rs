//! Flat-connection ("Lax") pair machinery: the six explicit pair assemblies,
//! the zero-curvature residual engine, the compatibility operator that ties a
//! pair to the boundary-distribution PDE, eigenvector propagation along
//! axis-aligned paths, and a small algebraic identity used by the derivation
//! of the coupling-4 pair.
//!
//! A pair assigns to each `(t, x)` two matrices `L` and `B` driving
//! `d(F,G)/dx = L (F,G)` and `d(F,G)/dt = B (F,G)`. Flatness
//! (`dL/dt - dB/dx - [B, L] = 0`) makes propagation path-independent, and the
//! compatibility operator's vanishing top row is what makes the first
//! component `F` a solution of the distribution PDE.

mod matrix;
mod pairs;

pub use matrix::{Matrix2, PolePowers};
pub use pairs::{
    assemble_soft_thm4, assemble_soft_thm5, assemble_thm1a, assemble_thm1b, assemble_thm2,
    assemble_thm3, assemble_thm3_fd, beta2_flow_provider, beta4_flow_provider, soft_spm_tables,
    Beta2HardAssembly, Beta2State, Beta4HardAssembly, Beta4State, ExplicitPairAssembly,
    SoftBeta4Assembly, SoftPIIAssembly,
};

use crate::error::{Error, Result, SINGULAR_BAND};
use crate::num::{integrate_ivp, Tolerances};

/// Which compatibility operator a pair belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompatMode {
    /// Wall-pinned operator `kt B + x^2 (dL/dx + L^2) + (ax - x^2 - 1/t) L`.
    Hard,
    /// Scaling-limit operator `k B + dL/dx + L^2 + (t - x^2) L`.
    Soft,
}

/// The compatibility operator mode and the `(kappa, a)` at which a pair's
/// operator has a vanishing top row.
#[derive(Debug, Clone, Copy)]
pub struct CompatSpec {
    pub mode: CompatMode,
    pub kappa: f64,
    pub a: f64,
}

/// A pair assembly: pole-coefficient matrices as functions of `t` with exact
/// t-derivatives, plus direct displayed-entry evaluation as an independent
/// arithmetic path for cross-checks.
pub trait LaxAssembly: Sync {
    /// Coefficient matrices and their t-derivatives at `t`.
    fn poles_with_derivative(&self, t: f64) -> Result<(PolePowers, PolePowers)>;

    /// `L(t,x)` evaluated literally from the displayed entry formulas.
    fn l_direct(&self, t: f64, x: f64) -> Result<Matrix2>;

    /// `B(t,x)` evaluated literally from the displayed entry formulas.
    fn b_direct(&self, t: f64, x: f64) -> Result<Matrix2>;

    /// The compatibility mode and matching `(kappa, a)` of this pair.
    fn compat_spec(&self) -> CompatSpec;

    /// Coefficient matrices at `t`.
    fn poles(&self, t: f64) -> Result<PolePowers> {
        Ok(self.poles_with_derivative(t)?.0)
    }

    /// `L(t,x)` reconstructed from the coefficients.
    fn l(&self, t: f64, x: f64) -> Result<Matrix2> {
        self.poles(t)?.l_at(x)
    }

    /// `B(t,x)` reconstructed from the coefficients.
    fn b(&self, t: f64, x: f64) -> Result<Matrix2> {
        self.poles(t)?.b_at(x)
    }

    /// Analytic `dL/dx`.
    fn dl_dx(&self, t: f64, x: f64) -> Result<Matrix2> {
        self.poles(t)?.l_dx(x)
    }

    /// Analytic `dB/dx`.
    fn db_dx(&self, t: f64, x: f64) -> Result<Matrix2> {
        self.poles(t)?.b_dx(x)
    }

    /// Analytic `dL/dt` via the jet-propagated coefficients.
    fn dl_dt(&self, t: f64, x: f64) -> Result<Matrix2> {
        self.poles_with_derivative(t)?.1.l_at(x)
    }
}

/// The flatness residual `dL/dt - dB/dx - [B, L]` at `(t, x)`; the zero
/// matrix (to rounding) exactly when the pair is consistent there.
pub fn zero_curvature_residual(asm: &dyn LaxAssembly, t: f64, x: f64) -> Result<Matrix2> {
    let (p, pd) = asm.poles_with_derivative(t)?;
    let l = p.l_at(x)?;
    let b = p.b_at(x)?;
    Ok(pd.l_at(x)? - p.b_dx(x)? - b.commutator(&l))
}

/// The compatibility operator of the pair's mode applied at `(t, x)` with
/// caller-chosen `(kappa, a)`:
///
/// - hard: `kappa t B + x^2 (dL/dx + L^2) + (a x - x^2 - 1/t) L`
/// - soft: `kappa B + dL/dx + L^2 + (t - x^2) L` (`a` unused)
///
/// For a valid pair at its matching `(kappa, a)` the top row vanishes, which
/// is exactly the statement that the eigenvector's first component solves the
/// distribution PDE.
pub fn fp_compat_matrix(
    asm: &dyn LaxAssembly,
    kappa: f64,
    a: f64,
    t: f64,
    x: f64,
) -> Result<Matrix2> {
    let p = asm.poles(t)?;
    let l = p.l_at(x)?;
    let b = p.b_at(x)?;
    let lx = p.l_dx(x)?;
    match asm.compat_spec().mode {
        CompatMode::Hard => {
            Error::guard_positive("t", t, SINGULAR_BAND)?;
            Error::guard_nonzero("x", x, SINGULAR_BAND)?;
            Ok(b * (kappa * t) + (lx + l * l) * (x * x) + l * (a * x - x * x - 1.0 / t))
        }
        CompatMode::Soft => Ok(b * kappa + lx + l * l + l * (t - x * x)),
    }
}

/// Eigenvector components carried along a propagation path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigvecState {
    /// First component (the distribution function for valid pairs).
    pub f: f64,
    /// Second component (normalization fixed by the start point).
    pub g: f64,
}

/// One axis-aligned leg of a propagation path: move the named coordinate to
/// the given target while the other is held fixed.
#[derive(Debug, Clone, Copy)]
pub enum Leg {
    /// Integrate `d(F,G)/dx = L (F,G)` to this `x`.
    InX(f64),
    /// Integrate `d(F,G)/dt = B (F,G)` to this `t`.
    InT(f64),
}

/// A piecewise axis-aligned path in the `(t, x)` plane.
#[derive(Debug, Clone)]
pub struct Path {
    pub t0: f64,
    pub x0: f64,
    pub legs: Vec<Leg>,
}

impl Path {
    /// The endpoint reached after all legs.
    pub fn endpoint(&self) -> (f64, f64) {
        let (mut t, mut x) = (self.t0, self.x0);
        for leg in &self.legs {
            match *leg {
                Leg::InX(x1) => x = x1,
                Leg::InT(t1) => t = t1,
            }
        }
        (t, x)
    }
}

/// Propagate eigenvector components along an axis-aligned path, integrating
/// with `L` on x-legs and `B` on t-legs. For a flat pair the result depends
/// only on the endpoints, up to integration error.
pub fn propagate_eigvec(
    asm: &dyn LaxAssembly,
    path: &Path,
    state0: EigvecState,
) -> Result<EigvecState> {
    let tol = Tolerances::default().tightened(100.0);
    let (mut t, mut x) = (path.t0, path.x0);
    let mut s = [state0.f, state0.g];
    for leg in &path.legs {
        match *leg {
            Leg::InX(x1) => {
                if (x1 - x).abs() > f64::EPSILON * (1.0 + x.abs()) {
                    let traj = integrate_ivp(
                        |xi: f64, v: &[f64], dv: &mut [f64]| -> Result<()> {
                            let m = asm.l(t, xi)?;
                            dv[0] = m.a11 * v[0] + m.a12 * v[1];
                            dv[1] = m.a21 * v[0] + m.a22 * v[1];
                            Ok(())
                        },
                        x,
                        &s,
                        x1,
                        tol,
                    )?;
                    let end = traj.states.last().expect("non-empty trajectory");
                    s = [end[0], end[1]];
                }
                x = x1;
            }
            Leg::InT(t1) => {
                if (t1 - t).abs() > f64::EPSILON * (1.0 + t.abs()) {
                    let traj = integrate_ivp(
                        |ti: f64, v: &[f64], dv: &mut [f64]| -> Result<()> {
                            let m = asm.b(ti, x)?;
                            dv[0] = m.a11 * v[0] + m.a12 * v[1];
                            dv[1] = m.a21 * v[0] + m.a22 * v[1];
                            Ok(())
                        },
                        t,
                        &s,
                        t1,
                        tol,
                    )?;
                    let end = traj.states.last().expect("non-empty trajectory");
                    s = [end[0], end[1]];
                }
                t = t1;
            }
        }
    }
    Ok(EigvecState { f: s[0], g: s[1] })
}

/// Residual of the antidiagonal bracket identity
/// `{P,Q}^2 - [P,Q]^2 = 4 P^2 Q^2` for `P = antidiag(p_plus, p_minus)` and
/// `Q = antidiag(q_plus, q_minus)`, evaluated through matrix algebra.
pub fn antidiag_identity_residual(p_plus: f64, p_minus: f64, q_plus: f64, q_minus: f64) -> f64 {
    let p = Matrix2::new(0.0, p_plus, p_minus, 0.0);
    let q = Matrix2::new(0.0, q_plus, q_minus, 0.0);
    let s = p.anticommutator(&q);
    let c = p.commutator(&q);
    let lhs = s * s - c * c;
    let rhs = (p * p) * (q * q) * 4.0;
    (lhs - rhs).norm_inf()
}
