//! Shared numerical substrate: adaptive explicit Runge-Kutta integration with
//! dense output, first-order jets (dual numbers) for analytic derivatives of
//! composite formulas, central finite differences, bisection root finding,
//! and Airy-function evaluation from its defining ODE.

pub mod airy;
pub mod fd;
pub mod jet;
pub mod ode;
pub mod root;

pub use airy::airy_ai;
pub use fd::{fd_partial, fd_second};
pub use jet::Jet;
pub use ode::{integrate_checkpoints, integrate_ivp, Tolerances, Trajectory};
pub use root::bisect;
