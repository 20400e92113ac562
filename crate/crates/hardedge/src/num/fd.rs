//! Central finite differences for scalar functions of one real variable.

use crate::error::{Error, Result};

/// Second-order central difference `(f(s+h) - f(s-h)) / (2h)`.
///
/// The truncation error is `O(h^2 f''')` for smooth `f`; with the default
/// `fd_step = 1e-5` this sits well below the crate's residual thresholds.
pub fn fd_partial<F>(mut f: F, s: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if h <= 0.0 {
        return Err(Error::DomainError(format!("fd step must be positive, got {h:e}")));
    }
    let d = (f(s + h) - f(s - h)) / (2.0 * h);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonFiniteValue { s })
    }
}

/// Second-order central second difference `(f(s+h) - 2 f(s) + f(s-h)) / h^2`.
pub fn fd_second<F>(mut f: F, s: f64, h: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if h <= 0.0 {
        return Err(Error::DomainError(format!("fd step must be positive, got {h:e}")));
    }
    let d = (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
    if d.is_finite() {
        Ok(d)
    } else {
        Err(Error::NonFiniteValue { s })
    }
}
