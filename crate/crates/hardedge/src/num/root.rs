//! Bisection root finding on a sign change.

use crate::error::{Error, Result};

/// Find a root of `f` in `[lo, hi]` by bisection.
///
/// Requires a sign change between the endpoints. Iterates until the bracket
/// width drops below `tol` (absolute) or `max_iter` halvings, whichever comes
/// first, and returns the bracket midpoint. Deterministic.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let flo = f(lo);
    let fhi = f(hi);
    if !flo.is_finite() || !fhi.is_finite() {
        return Err(Error::ConvergenceFailed(
            "bisection endpoint evaluated non-finite".into(),
        ));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::ConvergenceFailed(format!(
            "no sign change on [{lo:e}, {hi:e}]"
        )));
    }
    let mut flo = flo;
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol {
            return Ok(mid);
        }
        let fm = f(mid);
        if !fm.is_finite() {
            return Err(Error::ConvergenceFailed(format!(
                "bisection midpoint non-finite at {mid:e}"
            )));
        }
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_square_root_of_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 200).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_same_sign_bracket() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_err());
    }

    #[test]
    fn exact_endpoint_root_is_returned() {
        let r = bisect(|x| x, 0.0, 1.0, 1e-12, 100).unwrap();
        assert_eq!(r, 0.0);
    }
}
