//! Error taxonomy shared by every module of the crate.
//!
//! The split mirrors how callers recover: `SingularInput` and `DomainError`
//! are precondition violations the caller can avoid, the integration errors
//! (`StepLimitExceeded`, `NonFiniteState`) usually mean the trajectory left
//! the region where the model is meaningful, and the solver-specific variants
//! carry enough context to retune grids or seeds.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input sits on (or numerically indistinguishable from) a pole or
    /// turning point of the evaluated formula, e.g. `y = 0`, `q^2 = 1`,
    /// `t = 0`, or a vanishing denominator.
    #[error("singular input: {what} = {value:e} is inside the guard band")]
    SingularInput { what: &'static str, value: f64 },

    /// A parameter violates a stated domain restriction (not a singularity of
    /// a formula, but of the problem: `t <= 0`, `x <= 0`, `r < -1`, ...).
    #[error("domain error: {0}")]
    DomainError(String),

    /// Adaptive integration used up its step budget.
    #[error("step limit exceeded: {max_steps} steps")]
    StepLimitExceeded { max_steps: usize },

    /// The state or right-hand side stopped being finite during integration.
    #[error("non-finite state at s = {s:e}")]
    NonFiniteState { s: f64 },

    /// A finite-difference stencil evaluated to a non-finite value.
    #[error("non-finite value in finite-difference stencil at s = {s:e}")]
    NonFiniteValue { s: f64 },

    /// Boundary-value shooting failed to bracket or converge.
    #[error("shooting failed: {0}")]
    ShootingFailed(String),

    /// Interpolation was requested outside a tabulated range.
    #[error("range error: s = {s:e} outside table [{lo:e}, {hi:e}]")]
    RangeError { s: f64, lo: f64, hi: f64 },

    /// The PDE field left its physical bounds during time stepping.
    #[error("instability detected: field value {value:e} at t = {t:e}")]
    InstabilityDetected { t: f64, value: f64 },

    /// Step-halving changed the PDE solution more than the tolerance allows.
    #[error("grid too coarse: refinement shift {shift:e} exceeds {allowed:e}")]
    GridTooCoarse { shift: f64, allowed: f64 },

    /// A constructed object violates a constraint it promised to satisfy.
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    /// Eigenvalue bisection (or another iteration) failed to converge.
    #[error("convergence failed: {0}")]
    ConvergenceFailed(String),

    /// Statistics were requested of an empty sample.
    #[error("empty sample")]
    EmptySample,
}

impl Error {
    /// Guard helper: error out when `value` is within `band` of zero.
    pub fn guard_nonzero(what: &'static str, value: f64, band: f64) -> Result<f64> {
        if value.abs() < band {
            Err(Error::SingularInput { what, value })
        } else {
            Ok(value)
        }
    }

    /// Guard helper: error out when `value` is not strictly positive by `band`.
    pub fn guard_positive(what: &'static str, value: f64, band: f64) -> Result<f64> {
        if value < band {
            Err(Error::SingularInput { what, value })
        } else {
            Ok(value)
        }
    }
}

/// Default guard band below which magnitudes count as singular.
pub const SINGULAR_BAND: f64 = 1e-13;
