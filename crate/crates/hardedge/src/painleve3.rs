//! Painleve III structure of the hard-edge distribution functions.
//!
//! The smallest-eigenvalue law at a hard spectral edge is driven by a small
//! family of interlocking ODE systems in the time-like variable `t`:
//!
//! - two scalar second-order equations of Painleve III type (`family A` and
//!   `family B`), each carrying a sign parameter; the distribution-bearing
//!   ("theorem") forms use the minus sign,
//! - the equivalent coupled first-order systems in `(q, y)` that the 2x2
//!   linear pairs actually close under ([`coupled_rhs`]),
//! - a scalar second-order equation in `q` alone for the symplectic-class
//!   edge ([`tw_rhs`]) with its exponential companions `S+`/`S-`
//!   ([`spm_rhs`]) and Hamiltonian-like scalar ([`h0_eval`]),
//! - algebraic bridges between the `y`-language and an `r`-language
//!   ([`r_of_q`], [`r_from_y`], [`y_from_r`], [`r_y_system_b_rhs`]) that the
//!   soft-edge crossover is phrased in.
//!
//! Everything here is a pure function: right-hand sides, transforms, and
//! residuals. No distinguished solution is selected — all identity checks in
//! the test suite hold along *any* trajectory from consistent seeds, so the
//! module never needs connection formulas or boundary data.
//!
//! Singularity policy: evaluations within `1e-13` of a pole (`y = 0`,
//! `q^2 = 1`, `t = 0`, vanishing denominators) return
//! [`Error::SingularInput`](crate::error::Error::SingularInput) rather than
//! a large number, so trajectories fail loudly at turning points.

use crate::error::{Error, Result, SINGULAR_BAND};

/// Which of the two scalar Painleve III forms (and their coupled systems) is
/// meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// The form whose coupled system reads
    /// `t^3 y' = 2q^2 - 1 - t^3 y^2 - (a+1) t^2 y`.
    A,
    /// The form whose coupled system reads
    /// `t^3 y' = 2q^2 - 1 - t^3 y^2 + (a-2) t^2 y`.
    B,
}

/// Sign parameter housing the square root branch taken when reducing the
/// fourth-order content to Painleve III; the distribution-bearing forms use
/// [`Sign::Minus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// The sign as a factor, `+1.0` or `-1.0`.
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Selector for one of the four scalar Painleve III variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PIIIVariant {
    pub family: Family,
    pub sign: Sign,
}

impl PIIIVariant {
    /// The distribution-bearing variant of the given family (minus sign).
    pub fn theorem(family: Family) -> Self {
        PIIIVariant {
            family,
            sign: Sign::Minus,
        }
    }
}

/// Parameters of the hard-edge family: the (rescaled) exponent `a`, the
/// half-inverse-temperature `kappa = beta/2`, and the variant selector.
#[derive(Debug, Clone, Copy)]
pub struct PIIIParams {
    pub a: f64,
    pub kappa: f64,
    pub variant: PIIIVariant,
}

impl PIIIParams {
    /// Validated constructor; `kappa` must be positive.
    pub fn new(a: f64, kappa: f64, variant: PIIIVariant) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::DomainError(format!(
                "kappa must be positive, got {kappa:e}"
            )));
        }
        Ok(PIIIParams { a, kappa, variant })
    }
}

/// State of the coupled `(q, y)` first-order system at time `t > 0`.
#[derive(Debug, Clone, Copy)]
pub struct CoupledState {
    pub t: f64,
    pub q: f64,
    pub y: f64,
}

/// State of the exponential companions `S+`, `S-` of the symplectic-class
/// scalar equation at time `t > 0`. The product `S+ S- = 1 - q^2` is a
/// conserved quantity of their flow (checked in tests, not enforced here).
#[derive(Debug, Clone, Copy)]
pub struct SPMState {
    pub t: f64,
    pub s_plus: f64,
    pub s_minus: f64,
}

fn guard_t(t: f64) -> Result<f64> {
    Error::guard_positive("t", t, SINGULAR_BAND)
}

fn guard_y(y: f64) -> Result<f64> {
    Error::guard_nonzero("y", y, SINGULAR_BAND)
}

fn guard_q2m1(q: f64) -> Result<f64> {
    Error::guard_nonzero("q^2 - 1", q * q - 1.0, SINGULAR_BAND)
}

/// Right-hand side `y''` of the selected scalar Painleve III variant.
///
/// With `s` the sign factor, the two families read
///
/// ```text
/// A:  y'' = (y')^2/y - y'/t + y^3 - s (a/t) y^2 + s (a-1)/t^4 - 1/(t^6 y)
/// B:  y'' = (y')^2/y - y'/t + y^3 + s ((a-1)/t) y^2 - s a/t^4 - 1/(t^6 y)
/// ```
///
/// so at `s = -1` (theorem forms) the `A` coefficients become `+(a/t)` and
/// `-(a-1)/t^4`.
pub fn piii_rhs(params: &PIIIParams, t: f64, y: f64, yp: f64) -> Result<f64> {
    guard_t(t)?;
    guard_y(y)?;
    let a = params.a;
    let s = params.variant.sign.value();
    let common = yp * yp / y - yp / t + y.powi(3) - 1.0 / (t.powi(6) * y);
    Ok(match params.variant.family {
        Family::A => common - s * (a / t) * y * y + s * (a - 1.0) / t.powi(4),
        Family::B => common + s * ((a - 1.0) / t) * y * y - s * a / t.powi(4),
    })
}

/// Change of variables `xi = t^(-1/2)`, `z = y t^(3/2)` taking either family
/// into a standard Painleve III equation in `(xi, z)`.
pub fn standard_form(t: f64, y: f64) -> Result<(f64, f64)> {
    guard_t(t)?;
    Ok((t.powf(-0.5), y * t.powf(1.5)))
}

/// Inverse of [`standard_form`]: `t = xi^(-2)`, `y = z xi^3`.
pub fn standard_form_inverse(xi: f64, z: f64) -> Result<(f64, f64)> {
    Error::guard_positive("xi", xi, SINGULAR_BAND)?;
    Ok((xi.powi(-2), z * xi.powi(3)))
}

/// Second-order jet transport of [`standard_form`]: given `(y, y', y'')` at
/// `t`, returns `(xi, z, dz/dxi, d2z/dxi2)`.
///
/// With `dt/dxi = -2 t^(3/2)` the chain rule gives
/// `z'(xi) = -2 t^3 y' - 3 t^2 y` and
/// `z''(xi) = 4 t^(9/2) y'' + 18 t^(7/2) y' + 12 t^(5/2) y`.
pub fn standard_jet(t: f64, y: f64, yp: f64, ypp: f64) -> Result<(f64, f64, f64, f64)> {
    let (xi, z) = standard_form(t, y)?;
    let zp = -2.0 * t.powi(3) * yp - 3.0 * t * t * y;
    let zpp = 4.0 * t.powf(4.5) * ypp + 18.0 * t.powf(3.5) * yp + 12.0 * t.powf(2.5) * y;
    Ok((xi, z, zp, zpp))
}

/// Residual of the standard Painleve III equation the selected variant maps
/// onto under [`standard_form`]:
///
/// ```text
/// A:  z'' - [ (z')^2/z - z'/xi + 4z^3 - (4 s a/xi) z^2 + 4 s (a-1)/xi - 4/z ]
/// B:  z'' - [ (z')^2/z - z'/xi + 4z^3 + (4 s (a-1)/xi) z^2 - 4 s a/xi - 4/z ]
/// ```
///
/// Zero for jets transported from true solutions of the matching variant.
pub fn standard_residual(params: &PIIIParams, xi: f64, z: f64, zp: f64, zpp: f64) -> Result<f64> {
    Error::guard_positive("xi", xi, SINGULAR_BAND)?;
    Error::guard_nonzero("z", z, SINGULAR_BAND)?;
    let a = params.a;
    let s = params.variant.sign.value();
    let common = zp * zp / z - zp / xi + 4.0 * z.powi(3) - 4.0 / z;
    let rhs = match params.variant.family {
        Family::A => common - 4.0 * s * a / xi * z * z + 4.0 * s * (a - 1.0) / xi,
        Family::B => common + 4.0 * s * (a - 1.0) / xi * z * z - 4.0 * s * a / xi,
    };
    Ok(zpp - rhs)
}

/// First-order coupled system both 2x2 linear pairs of the orthogonal /
/// unitary classes close under; returns `(q', y')`.
///
/// ```text
/// A:  t^3 y' = 2q^2 - 1 - t^3 y^2 - (a+1) t^2 y,
///     t q'  = q(q^2-1)/(t^2 y) - ((a-1)/2) q
/// B:  t^3 y' = 2q^2 - 1 - t^3 y^2 + (a-2) t^2 y,
///     t q'  = q(q^2-1)/(t^2 y) + (a/2) q
/// ```
///
/// Eliminating `q` reproduces the matching [`piii_rhs`] scalar equation;
/// tests verify this along trajectories. The sign parameter plays no role
/// here (the coupled systems are the theorem forms).
pub fn coupled_rhs(params: &PIIIParams, state: &CoupledState) -> Result<(f64, f64)> {
    let t = guard_t(state.t)?;
    let y = guard_y(state.y)?;
    let q = state.q;
    let a = params.a;
    let t2 = t * t;
    let t3 = t2 * t;
    let (yp, qp) = match params.variant.family {
        Family::A => (
            (2.0 * q * q - 1.0 - t3 * y * y - (a + 1.0) * t2 * y) / t3,
            (q * (q * q - 1.0) / (t2 * y) - (a - 1.0) / 2.0 * q) / t,
        ),
        Family::B => (
            (2.0 * q * q - 1.0 - t3 * y * y + (a - 2.0) * t2 * y) / t3,
            (q * (q * q - 1.0) / (t2 * y) + a / 2.0 * q) / t,
        ),
    };
    Ok((qp, yp))
}

/// The scalar companion `h(t)` of the coupled systems:
///
/// ```text
/// A:  h = (q^2 - 1)/(t^2 y) - (a - 1)
/// B:  h = (q^2 - 1)/(t^2 y) + a
/// ```
///
/// This is the canonical normalization; the `r`-language variant of the same
/// quantity differs by an exact factor `4q^2` under `r = -1 + 2q^2`.
pub fn h_aux(params: &PIIIParams, t: f64, q: f64, y: f64) -> Result<f64> {
    guard_t(t)?;
    guard_y(y)?;
    let core = (q * q - 1.0) / (t * t * y);
    Ok(match params.variant.family {
        Family::A => core - (params.a - 1.0),
        Family::B => core + params.a,
    })
}

/// Right-hand side `q''` of the symplectic-class scalar equation, solved for
/// from the relation
///
/// ```text
/// t (q^2 - 1) (t q')' = q (t q')^2 + q^3 (q^2 - 2)/t + (1/t - a^2/4) q .
/// ```
pub fn tw_rhs(a: f64, t: f64, q: f64, qp: f64) -> Result<f64> {
    guard_t(t)?;
    guard_q2m1(q)?;
    let tqp = t * qp;
    let rhs = q * tqp * tqp + q.powi(3) * (q * q - 2.0) / t + (1.0 / t - a * a / 4.0) * q;
    Ok((rhs - t * (q * q - 1.0) * qp) / (t * t * (q * q - 1.0)))
}

/// The algebraic bridge `r = -1 + 2 q^2` between the `q`-language and the
/// `r`-language.
pub fn r_of_q(q: f64) -> f64 {
    -1.0 + 2.0 * q * q
}

/// Inverse bridge: the nonnegative root `|q| = sqrt((r+1)/2)`.
pub fn q_of_r(r: f64) -> Result<f64> {
    if r < -1.0 {
        return Err(Error::DomainError(format!(
            "r must be >= -1 for a real q, got {r:e}"
        )));
    }
    Ok(((r + 1.0) / 2.0).sqrt())
}

/// `r` recovered from the `y`-jet: `r = t^3 (y' + y^2) + (a+1) t^2 y`.
///
/// Along any family-A trajectory this equals `-1 + 2q^2` exactly (substitute
/// the `y'` equation).
pub fn r_from_y(a: f64, t: f64, y: f64, yp: f64) -> f64 {
    t.powi(3) * (yp + y * y) + (a + 1.0) * t * t * y
}

/// `y` recovered from the `r`-jet:
/// `y = (r^2 - 1) / (t^2 (t r' + (a-1)(r+1)))`.
pub fn y_from_r(a: f64, t: f64, r: f64, rp: f64) -> Result<f64> {
    guard_t(t)?;
    let denom = Error::guard_nonzero(
        "t r' + (a-1)(r+1)",
        t * rp + (a - 1.0) * (r + 1.0),
        SINGULAR_BAND,
    )?;
    Ok((r * r - 1.0) / (t * t * denom))
}

/// First-order system in `(r, y)` for the family-B normalization; returns
/// `(r', y')` solved from
///
/// ```text
/// t (t^2 y)' = r - t^3 y^2 + a t^2 y,
/// t r'       = (r^2 - 1)/(t^2 y) + a (r + 1) .
/// ```
pub fn r_y_system_b_rhs(a: f64, t: f64, r: f64, y: f64) -> Result<(f64, f64)> {
    guard_t(t)?;
    guard_y(y)?;
    let t2 = t * t;
    let rp = ((r * r - 1.0) / (t2 * y) + a * (r + 1.0)) / t;
    let yp = (r - t2 * t * y * y + a * t2 * y - 2.0 * t2 * y) / (t2 * t);
    Ok((rp, yp))
}

/// Log-derivative flow of the exponential companions; returns
/// `(s_plus', s_minus')` from
///
/// ```text
/// (ln S+)' = q q'/(q^2-1) + a q/(2t (q^2-1)),
/// (ln S-)' = q q'/(q^2-1) - a q/(2t (q^2-1)) .
/// ```
///
/// Seeding with `S+ S- = 1 - q^2` makes that product a conserved quantity of
/// the joint flow with [`tw_rhs`].
pub fn spm_rhs(a: f64, t: f64, q: f64, qp: f64, s: &SPMState) -> Result<(f64, f64)> {
    guard_t(t)?;
    guard_q2m1(q)?;
    let sym = q * qp / (q * q - 1.0);
    let asym = a * q / (2.0 * t * (q * q - 1.0));
    Ok((s.s_plus * (sym + asym), s.s_minus * (sym - asym)))
}

/// The symplectic-class scalar companion
///
/// ```text
/// h0 = (1/(2t)) ( -((2t q')^2 - a^2)/(4 (q^2 - 1)) + q^2/t + a(a-2)/4 ) .
/// ```
pub fn h0_eval(a: f64, t: f64, q: f64, qp: f64) -> Result<f64> {
    guard_t(t)?;
    guard_q2m1(q)?;
    let tq = 2.0 * t * qp;
    let inner = -(tq * tq - a * a) / (4.0 * (q * q - 1.0)) + q * q / t + a * (a - 2.0) / 4.0;
    Ok(inner / (2.0 * t))
}

/// Companion solution at the reflected parameter `1 - a`, constructed from
/// the two algebraic identities
///
/// ```text
/// y(t; a) y(t; 1-a) = -1/t^3,
/// q^2(t; a)/y(t; a) + q^2(t; 1-a)/y(t; 1-a) = 0 .
/// ```
///
/// Returns `(q_partner^2, y_partner)`. Whenever `(q, y)` solves
/// [`coupled_rhs`] at parameter `a`, the constructed pair solves the same
/// family at `1 - a`; applying the map twice is the identity.
pub fn cross_a_partner(t: f64, _a: f64, q: f64, y: f64) -> Result<(f64, f64)> {
    guard_t(t)?;
    guard_y(y)?;
    let t3 = t.powi(3);
    let y_partner = -1.0 / (t3 * y);
    let qsq_partner = q * q / (t3 * y * y);
    Ok((qsq_partner, y_partner))
}
