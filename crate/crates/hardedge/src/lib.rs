//! Numerical laboratory for the smallest-eigenvalue law of hard-edge random
//! matrix ensembles and its integrable structure.
//!
//! The central object is the scaled distribution function `F(t, x)` of the
//! smallest eigenvalue near a hard spectral edge, which satisfies a
//! Fokker-Planck equation in the time-like variable `t` and the spectral
//! variable `x`. The crate builds the surrounding integrable machinery:
//!
//! - [`painleve3`]: the Painleve III prime-form scalar equations, the coupled
//!   first-order systems they close under, and the auxiliary quantities tied
//!   to the two classical symmetry classes.
//! - [`painleve2`]: the Painleve II equation, its distinguished
//!   Hastings-McLeod solution built from the decaying Airy function, and the
//!   half-integer-parameter ladder it generates.
//! - [`lax`]: the 2x2 linear systems (Lax pairs) whose compatibility encodes
//!   the nonlinear equations, with zero-curvature and Fokker-Planck
//!   compatibility residuals as checkable certificates.
//! - [`fp`]: a direct finite-difference solver for the Fokker-Planck PDE and
//!   the explicit exponential solution available at a distinguished coupling.
//! - [`limits`]: the hard-to-soft edge crossover, realized as an exact
//!   change of variables at finite scale parameter with a controlled limit.
//! - [`mc`]: Monte Carlo sampling of the finite-n smallest eigenvalue via
//!   bidiagonal ensembles, for distributional cross-checks.
//! - [`verify`]: the end-to-end certification suite tying all of the above
//!   together with fixed tolerances.
//!
//! All floating-point work is `f64`; deterministic seeds make every sampled
//! quantity reproducible bit-for-bit.

pub mod error;
pub mod fp;
pub mod lax;
pub mod limits;
pub mod mc;
pub mod num;
pub mod painleve2;
pub mod painleve3;
pub mod verify;

pub use error::{Error, Result};
