//! Painleve II machinery for the soft-edge limit: the Hastings-McLeod
//! solution, its companion `u`, the Painleve XXXIV form, and the
//! half-integer-parameter ladder (Gambier relation).
//!
//! The Hastings-McLeod solution of `q'' = t q + 2 q^3` is the unique
//! solution decaying like the Airy function on the right; it is the seed for
//! every soft-edge fixture in this crate. It is constructed by shooting: the
//! Airy asymptote is imposed at a far-right anchor with a multiplicative
//! factor `c`, and `c` is bisected between solutions that blow up and
//! solutions that cross zero — Hastings-McLeod is the separatrix between the
//! two behaviors.
//!
//! Numerical care: near the anchor the solution is of order `1e-10`, so the
//! shooting integrations run with a vanishingly small absolute tolerance
//! (`1e-24`) and are controlled relatively; an ordinary absolute floor would
//! silently commit `1e-6`-sized relative errors at the anchor that propagate
//! to `q(0)`. The bisection legs do cross zero, where the relative scale
//! collapses, but the floor binds only on a sliver of width `~1e-12` in `t`,
//! costing at most a step rejection or two.

use crate::error::{Error, Result};
use crate::num::{airy_ai, integrate_checkpoints, integrate_ivp, Tolerances};

/// Right-hand side of the homogeneous Painleve II equation `q'' = t q + 2 q^3`.
pub fn pii_rhs(t: f64, q: f64) -> f64 {
    t * q + 2.0 * q.powi(3)
}

/// Right-hand side of the general Painleve II equation
/// `q'' = t q + 2 q^3 + nu`.
pub fn pii_general_rhs(t: f64, q: f64, nu: f64) -> f64 {
    t * q + 2.0 * q.powi(3) + nu
}

/// Cubic Hermite interpolation on one interval from endpoint values and
/// derivatives; returns (value, derivative of the interpolant).
fn hermite(t0: f64, t1: f64, v0: f64, v1: f64, d0: f64, d1: f64, t: f64) -> (f64, f64) {
    let h = t1 - t0;
    let u = (t - t0) / h;
    let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    let h10 = u * (1.0 - u) * (1.0 - u);
    let h01 = u * u * (3.0 - 2.0 * u);
    let h11 = u * u * (u - 1.0);
    let val = h00 * v0 + h10 * h * d0 + h01 * v1 + h11 * h * d1;
    let g00 = 6.0 * u * (u - 1.0) / h;
    let g10 = (1.0 - u) * (1.0 - 3.0 * u);
    let g01 = -6.0 * u * (u - 1.0) / h;
    let g11 = u * (3.0 * u - 2.0);
    let der = g00 * v0 + g10 * d0 + g01 * v1 + g11 * d1;
    (val, der)
}

fn bracket_ascending(grid: &[f64], t: f64) -> Result<usize> {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let eps = 1e-12 * (1.0 + lo.abs().max(hi.abs()));
    if t < lo - eps || t > hi + eps {
        return Err(Error::RangeError { s: t, lo, hi });
    }
    let mut a = 0usize;
    let mut b = grid.len() - 1;
    while b - a > 1 {
        let m = (a + b) / 2;
        if grid[m] <= t {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(a)
}

/// The Hastings-McLeod solution tabulated on a uniform grid, with its
/// derivative and the companion `u = (q')^2 - t q^2 - q^4`.
///
/// `q` is positive and `u` non-increasing on the tabulated range; these and
/// the defining relation `u' = -q^2` are verified in the test suite rather
/// than enforced per call.
#[derive(Debug, Clone)]
pub struct HMSolution {
    /// Ascending, uniformly spaced nodes.
    pub grid: Vec<f64>,
    /// Solution values at the nodes.
    pub q: Vec<f64>,
    /// Derivative values at the nodes.
    pub qp: Vec<f64>,
    /// Companion values `u = (q')^2 - t q^2 - q^4` at the nodes.
    pub u: Vec<f64>,
}

impl HMSolution {
    /// Covered range `(t_min, t_max)`.
    pub fn range(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }

    /// Interpolated `q(t)` (cubic Hermite through tabulated values and
    /// derivatives).
    pub fn sample_q(&self, t: f64) -> Result<f64> {
        let i = bracket_ascending(&self.grid, t)?;
        Ok(hermite(
            self.grid[i],
            self.grid[i + 1],
            self.q[i],
            self.q[i + 1],
            self.qp[i],
            self.qp[i + 1],
            t,
        )
        .0)
    }

    /// Interpolated `q'(t)`; node derivatives of `q'` come from the defining
    /// equation.
    pub fn sample_qp(&self, t: f64) -> Result<f64> {
        let i = bracket_ascending(&self.grid, t)?;
        Ok(hermite(
            self.grid[i],
            self.grid[i + 1],
            self.qp[i],
            self.qp[i + 1],
            pii_rhs(self.grid[i], self.q[i]),
            pii_rhs(self.grid[i + 1], self.q[i + 1]),
            t,
        )
        .0)
    }

    /// Interpolated `u(t)`; node derivatives are `-q^2`.
    pub fn sample_u(&self, t: f64) -> Result<f64> {
        let i = bracket_ascending(&self.grid, t)?;
        Ok(hermite(
            self.grid[i],
            self.grid[i + 1],
            self.u[i],
            self.u[i + 1],
            -self.q[i] * self.q[i],
            -self.q[i + 1] * self.q[i + 1],
            t,
        )
        .0)
    }

    /// The `(q, q')` data as a plain value/derivative table.
    pub fn to_table(&self) -> ScalarTable {
        ScalarTable {
            grid: self.grid.clone(),
            v: self.q.clone(),
            vp: self.qp.clone(),
        }
    }
}

/// How a shooting leg ended relative to the separatrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    /// Blow-up toward +infinity: seed factor too large.
    High,
    /// Zero crossing into the oscillatory regime: seed factor too small.
    Low,
}

/// Solve for the Hastings-McLeod solution on `[t_min, t_max]`.
///
/// The solution is anchored at `t_a = max(t_max, 8)` with the decaying Airy
/// values scaled by a factor `c`, and `c` is bisected until the interval
/// width drops below `tol` (or machine resolution): factors above the
/// separatrix blow up, factors below cross zero before `t_min - 2`. The
/// returned table has spacing `0.01` and carries `q`, `q'`, and
/// `u = (q')^2 - t q^2 - q^4`.
///
/// `tol` also bounds the per-step relative integration error (floored at
/// `1e-13`).
pub fn solve_hastings_mcleod(t_min: f64, t_max: f64, tol: f64) -> Result<HMSolution> {
    if !(t_min < 0.0 && 0.0 < t_max) {
        return Err(Error::DomainError(format!(
            "need t_min < 0 < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if t_max < 6.0 {
        return Err(Error::DomainError(format!(
            "t_max must be at least 6 for the Airy asymptote to be clean, got {t_max}"
        )));
    }
    let anchor = t_max.max(8.0);
    let (ai_a, aip_a) = airy_ai(anchor)?;
    let int_tol = Tolerances {
        abs_tol: 1e-24,
        rel_tol: tol.max(1e-13),
        ..Tolerances::default()
    };
    let t_probe = t_min - 2.0;
    let rhs = |t: f64, s: &[f64], ds: &mut [f64]| -> Result<()> {
        if s[0].abs() > 1e3 {
            return Err(Error::InstabilityDetected { t, value: s[0] });
        }
        ds[0] = s[1];
        ds[1] = pii_rhs(t, s[0]);
        Ok(())
    };
    let classify = |c: f64| -> Side {
        match integrate_ivp(rhs, anchor, &[c * ai_a, c * aip_a], t_probe, int_tol) {
            // Any abort on the way down (guard trip, step collapse in a
            // blow-up) means the solution escaped upward.
            Err(_) => Side::High,
            Ok(traj) => {
                if traj.states.iter().any(|s| s[0] <= 0.0) {
                    Side::Low
                } else {
                    let last = traj.states.last().expect("non-empty");
                    let t_end = *traj.s.last().expect("non-empty");
                    if last[0] > (-t_end / 2.0).sqrt() {
                        Side::High
                    } else {
                        Side::Low
                    }
                }
            }
        }
    };
    let mut lo = 0.5;
    let mut hi = 1.5;
    if classify(lo) != Side::Low || classify(hi) != Side::High {
        return Err(Error::ShootingFailed(format!(
            "seed factors [{lo}, {hi}] do not bracket the separatrix at anchor {anchor}"
        )));
    }
    let width = tol.max(4.0 * f64::EPSILON);
    let mut iterations = 0;
    while hi - lo > width {
        iterations += 1;
        if iterations > 200 {
            return Err(Error::ShootingFailed(format!(
                "bisection did not reach width {width:e} in 200 iterations"
            )));
        }
        let mid = 0.5 * (lo + hi);
        match classify(mid) {
            Side::High => hi = mid,
            Side::Low => lo = mid,
        }
    }
    let c = 0.5 * (lo + hi);

    // Tabulate on the requested window with 0.01 spacing (exact endpoints).
    let n = ((t_max - t_min) / 0.01).round() as usize;
    let span = t_max - t_min;
    let grid_desc: Vec<f64> = (0..=n)
        .map(|k| t_min + span * (n - k) as f64 / n as f64)
        .collect();
    let slices = integrate_checkpoints(rhs, anchor, &[c * ai_a, c * aip_a], &grid_desc, int_tol)?;
    let mut grid = Vec::with_capacity(n + 1);
    let mut q = Vec::with_capacity(n + 1);
    let mut qp = Vec::with_capacity(n + 1);
    let mut u = Vec::with_capacity(n + 1);
    for (t, state) in slices.into_iter().rev() {
        grid.push(t);
        q.push(state[0]);
        qp.push(state[1]);
        u.push(state[1] * state[1] - t * state[0] * state[0] - state[0].powi(4));
    }
    Ok(HMSolution { grid, q, qp, u })
}

/// Sup over interior nodes of the defect `|u' + q^2|`, with `u'` formed by a
/// fourth-order five-point central difference of the tabulated `u`.
pub fn u_check(hm: &HMSolution) -> f64 {
    let n = hm.grid.len();
    if n < 5 {
        return 0.0;
    }
    let h = hm.grid[1] - hm.grid[0];
    let mut sup = 0.0_f64;
    for i in 2..n - 2 {
        let up = (-hm.u[i + 2] + 8.0 * hm.u[i + 1] - 8.0 * hm.u[i - 1] + hm.u[i - 2]) / (12.0 * h);
        sup = sup.max((up + hm.q[i] * hm.q[i]).abs());
    }
    sup
}

/// Residual of the Painleve XXXIV form `2 r r'' = (r')^2 + 4 t r^2 + 4 r^3`,
/// as `2 r r'' - (r')^2 - 4 t r^2 - 4 r^3`.
///
/// Substituting `r = 2 q^2` with `q` any Painleve II solution gives an exact
/// algebraic zero.
pub fn p34_residual(t: f64, r: f64, rp: f64, rpp: f64) -> f64 {
    2.0 * r * rpp - rp * rp - 4.0 * t * r * r - 4.0 * r.powi(3)
}

/// A value/derivative table of one scalar function on an ascending grid,
/// sampled by cubic Hermite interpolation (third-order accurate for the
/// derivative).
#[derive(Debug, Clone)]
pub struct ScalarTable {
    pub grid: Vec<f64>,
    pub v: Vec<f64>,
    pub vp: Vec<f64>,
}

impl ScalarTable {
    /// Covered range `(t_min, t_max)`.
    pub fn range(&self) -> (f64, f64) {
        (self.grid[0], self.grid[self.grid.len() - 1])
    }

    /// Interpolated `(value, derivative)` at `t`.
    pub fn sample(&self, t: f64) -> Result<(f64, f64)> {
        let i = bracket_ascending(&self.grid, t)?;
        Ok(hermite(
            self.grid[i],
            self.grid[i + 1],
            self.v[i],
            self.v[i + 1],
            self.vp[i],
            self.vp[i + 1],
            t,
        ))
    }
}

fn check_eps(eps: f64) -> Result<f64> {
    if eps == 1.0 || eps == -1.0 {
        Ok(eps)
    } else {
        Err(Error::DomainError(format!("eps must be +1 or -1, got {eps}")))
    }
}

/// Residual of the half-parameter ladder relation tying a parameter-zero
/// Painleve II solution `q0` to a parameter-`(-eps/2)` solution `qhalf`:
///
/// ```text
/// 2^(1/3) eps q0^2(-2^(-1/3) t)  -  [ qhalf'(t) + eps qhalf^2(t) + (eps/2) t ] .
/// ```
///
/// Both inputs are value/derivative tables; `q0` must cover the stretched
/// argument `-2^(-1/3) t` and `qhalf` must cover `t`.
pub fn gambier_residual(t: f64, q0: &ScalarTable, qhalf: &ScalarTable, eps: f64) -> Result<f64> {
    let eps = check_eps(eps)?;
    let cbrt2 = 2.0_f64.cbrt();
    let (q0v, _) = q0.sample(-t / cbrt2)?;
    let (qh, qhp) = qhalf.sample(t)?;
    Ok(cbrt2 * eps * q0v * q0v - (qhp + eps * qh * qh + eps / 2.0 * t))
}

/// Construct the distinguished parameter-`(-eps/2)` partner of `q0` by
/// integrating the ladder relation as a Riccati equation
///
/// ```text
/// qhalf' = 2^(1/3) eps q0^2(-2^(-1/3) t) - eps qhalf^2 - (eps/2) t
/// ```
///
/// from the seed `qhalf(0) = -eps 2^(-1/3) q0'(0)/q0(0)` (the log-derivative
/// solution; any other seed solves the Riccati equation but not Painleve II).
/// The table covers `[t_lo, t_hi]` around 0 with spacing `0.01`; `q0` must
/// cover the stretched arguments `[-2^(-1/3) t_hi, -2^(-1/3) t_lo]`.
pub fn gambier_half_table(
    q0: &ScalarTable,
    eps: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<ScalarTable> {
    let eps = check_eps(eps)?;
    if !(t_lo < 0.0 && 0.0 < t_hi) {
        return Err(Error::DomainError(format!(
            "table window must straddle 0, got [{t_lo}, {t_hi}]"
        )));
    }
    let cbrt2 = 2.0_f64.cbrt();
    let (q0_0, q0p_0) = q0.sample(0.0)?;
    if q0_0.abs() < crate::error::SINGULAR_BAND {
        return Err(Error::SingularInput {
            what: "q0(0)",
            value: q0_0,
        });
    }
    let seed = -eps / cbrt2 * q0p_0 / q0_0;
    let rhs = |t: f64, s: &[f64], ds: &mut [f64]| -> Result<()> {
        let (q0v, _) = q0.sample(-t / cbrt2)?;
        ds[0] = cbrt2 * eps * q0v * q0v - eps * s[0] * s[0] - eps / 2.0 * t;
        Ok(())
    };
    let tol = Tolerances {
        abs_tol: 1e-13,
        rel_tol: 1e-11,
        ..Tolerances::default()
    };
    // Two directional runs from the seed at 0, merged into one table.
    let n_lo = ((-t_lo) / 0.01).round().max(1.0) as usize;
    let n_hi = (t_hi / 0.01).round().max(1.0) as usize;
    let down: Vec<f64> = (1..=n_lo).map(|k| t_lo * k as f64 / n_lo as f64).collect();
    let up: Vec<f64> = (1..=n_hi).map(|k| t_hi * k as f64 / n_hi as f64).collect();
    let left = integrate_checkpoints(rhs, 0.0, &[seed], &down, tol)?;
    let right = integrate_checkpoints(rhs, 0.0, &[seed], &up, tol)?;
    let mut grid = Vec::with_capacity(n_lo + n_hi + 1);
    let mut v = Vec::with_capacity(n_lo + n_hi + 1);
    for (t, s) in left.into_iter().rev() {
        grid.push(t);
        v.push(s[0]);
    }
    grid.push(0.0);
    v.push(seed);
    for (t, s) in right {
        grid.push(t);
        v.push(s[0]);
    }
    let mut vp = Vec::with_capacity(grid.len());
    for (t, val) in grid.iter().zip(&v) {
        let mut d = [0.0];
        rhs(*t, &[*val], &mut d)?;
        vp.push(d[0]);
    }
    Ok(ScalarTable { grid, v, vp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Frozen from an independent tightened-tolerance shooting run; agrees
    // with published tabulations of the Hastings-McLeod solution.
    const HM_Q0: f64 = 0.367061551548;
    const HM_QP0: f64 = -0.295372105448;
    const HM_U0: f64 = 0.069091380709;

    fn hm_standard() -> HMSolution {
        solve_hastings_mcleod(-6.0, 8.0, 1e-12).unwrap()
    }

    #[test]
    fn pii_rhs_hand_values() {
        assert_eq!(pii_rhs(0.7, 0.0), 0.0);
        assert_eq!(pii_rhs(-17.3, 0.0), 0.0);
        assert_eq!(pii_rhs(-2.0, 1.0), 0.0);
        assert_eq!(pii_rhs(1.0, 1.0), 3.0);
        assert_eq!(pii_general_rhs(1.0, 1.0, -0.5), 2.5);
    }

    #[test]
    fn hastings_mcleod_matches_frozen_origin_values() {
        let hm = hm_standard();
        let q0 = hm.sample_q(0.0).unwrap();
        assert!((q0 - 0.36706).abs() < 1e-4);
        assert_relative_eq!(q0, HM_Q0, epsilon = 1e-8);
        assert_relative_eq!(hm.sample_qp(0.0).unwrap(), HM_QP0, epsilon = 1e-8);
        assert_relative_eq!(hm.sample_u(0.0).unwrap(), HM_U0, epsilon = 1e-8);
    }

    #[test]
    fn hastings_mcleod_decays_like_airy_on_the_right() {
        let hm = hm_standard();
        let (ai6, _) = airy_ai(6.0).unwrap();
        assert_relative_eq!(hm.sample_q(6.0).unwrap() / ai6, 1.0, epsilon = 1e-4);
    }

    #[test]
    fn hastings_mcleod_left_asymptote() {
        // q(t) ~ sqrt(-t/2) far left; at t = -8 the agreement is percent
        // level, and the defining relation vanishes at leading order there.
        let hm = solve_hastings_mcleod(-8.0, 8.0, 1e-12).unwrap();
        let q = hm.sample_q(-8.0).unwrap();
        assert_relative_eq!(q, 2.0, max_relative = 0.03);
    }

    #[test]
    fn hastings_mcleod_is_positive_with_nonincreasing_u() {
        let hm = hm_standard();
        assert!(hm.q.iter().all(|&q| q > 0.0));
        for i in 1..hm.u.len() {
            assert!(hm.u[i] <= hm.u[i - 1] + 1e-12, "u increased at node {i}");
        }
    }

    #[test]
    fn hastings_mcleod_solves_its_equation_on_the_table() {
        // Five-point differences of the tabulated derivative against the
        // right-hand side.
        let hm = hm_standard();
        let h = hm.grid[1] - hm.grid[0];
        let mut worst = 0.0_f64;
        for i in 2..hm.grid.len() - 2 {
            let qpp =
                (-hm.qp[i + 2] + 8.0 * hm.qp[i + 1] - 8.0 * hm.qp[i - 1] + hm.qp[i - 2])
                    / (12.0 * h);
            worst = worst.max((qpp - pii_rhs(hm.grid[i], hm.q[i])).abs());
        }
        assert!(worst < 1e-6, "equation defect {worst:e}");
    }

    #[test]
    fn u_satisfies_its_flow_equation() {
        let hm = hm_standard();
        let res = u_check(&hm);
        assert!(res < 1e-8, "u' + q^2 defect {res:e}");
    }

    #[test]
    fn u_check_flags_an_injected_defect() {
        let mut hm = hm_standard();
        let h = hm.grid[1] - hm.grid[0];
        let mid = hm.grid.len() / 2;
        hm.u[mid] += 0.01;
        assert!(u_check(&hm) >= 0.01 / (2.0 * h));
    }

    #[test]
    fn u_check_on_a_zero_table_is_zero() {
        let grid: Vec<f64> = (0..20).map(|k| k as f64 * 0.01).collect();
        let zeros = vec![0.0; 20];
        let hm = HMSolution {
            grid,
            q: zeros.clone(),
            qp: zeros.clone(),
            u: zeros,
        };
        assert_eq!(u_check(&hm), 0.0);
    }

    #[test]
    fn shooting_is_stable_under_anchor_change() {
        // Anchors 8 and 10 (via t_max) must agree at the origin.
        let a8 = solve_hastings_mcleod(-6.0, 8.0, 1e-12).unwrap();
        let a10 = solve_hastings_mcleod(-6.0, 10.0, 1e-12).unwrap();
        let d = (a8.sample_q(0.0).unwrap() - a10.sample_q(0.0).unwrap()).abs();
        assert!(d < 1e-6, "anchor sensitivity {d:e}");
    }

    #[test]
    fn solve_rejects_bad_windows() {
        assert!(matches!(
            solve_hastings_mcleod(1.0, 8.0, 1e-12),
            Err(Error::DomainError(_))
        ));
        assert!(matches!(
            solve_hastings_mcleod(-6.0, 5.0, 1e-12),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn p34_residual_zero_solution_and_hm_substitution() {
        assert_eq!(p34_residual(0.3, 0.0, 0.0, 1.7), 0.0);
        // r = 2q^2 with q any PII solution is an exact algebraic zero; use
        // node values so no interpolation enters.
        let hm = hm_standard();
        for i in (0..hm.grid.len()).step_by(97) {
            let (t, q, qp) = (hm.grid[i], hm.q[i], hm.qp[i]);
            let r = 2.0 * q * q;
            let rp = 4.0 * q * qp;
            let rpp = 4.0 * qp * qp + 4.0 * q * pii_rhs(t, q);
            let res = p34_residual(t, r, rp, rpp);
            assert!(res.abs() < 1e-12, "t={t}: residual {res:e}");
        }
        // A generic point is not on the equation's graph.
        assert!(p34_residual(0.5, 1.0, 0.2, 0.3).abs() > 1e-3);
    }

    #[test]
    fn gambier_trivial_case_is_a_riccati_identity() {
        // q0 = 0 collapses the ladder to qhalf' + qhalf^2 + t/2 = 0, solved
        // by log-derivatives of w'' = -t w/2.
        let grid: Vec<f64> = (0..=300).map(|k| -1.5 + 3.0 * k as f64 / 300.0).collect();
        let zeros = vec![0.0; grid.len()];
        let q0 = ScalarTable {
            grid: grid.clone(),
            v: zeros.clone(),
            vp: zeros,
        };
        let w_traj = integrate_ivp(
            |t, s, ds| {
                ds[0] = s[1];
                ds[1] = -t * s[0] / 2.0;
                Ok(())
            },
            -1.5,
            &[1.0, 0.3],
            1.5,
            Tolerances::default(),
        )
        .unwrap();
        let mut v = Vec::new();
        let mut vp = Vec::new();
        for &t in &grid {
            let s = w_traj.sample(t).unwrap();
            let (w, wp) = (s[0], s[1]);
            v.push(wp / w);
            vp.push(-t / 2.0 - (wp / w) * (wp / w));
        }
        let qhalf = ScalarTable { grid: grid.clone(), v, vp };
        for &t in grid.iter().step_by(13) {
            let res = gambier_residual(t, &q0, &qhalf, 1.0).unwrap();
            assert!(res.abs() < 1e-8, "t={t}: residual {res:e}");
        }
    }

    #[test]
    fn gambier_construction_solves_half_parameter_equation() {
        // Build qhalf from the Hastings-McLeod q0 by integrating the ladder,
        // then check it satisfies q'' = t q + 2 q^3 - eps/2 (five-point
        // differences of the tabulated derivative), for both signs.
        let hm = hm_standard();
        let q0 = hm.to_table();
        for eps in [1.0, -1.0] {
            let qhalf = gambier_half_table(&q0, eps, -2.0, 2.0).unwrap();
            let h = qhalf.grid[1] - qhalf.grid[0];
            let n = qhalf.grid.len();
            let mut worst = 0.0_f64;
            for i in 2..n - 2 {
                let qpp = (-qhalf.vp[i + 2] + 8.0 * qhalf.vp[i + 1] - 8.0 * qhalf.vp[i - 1]
                    + qhalf.vp[i - 2])
                    / (12.0 * h);
                let res = qpp - pii_general_rhs(qhalf.grid[i], qhalf.v[i], -eps / 2.0);
                worst = worst.max(res.abs());
            }
            assert!(worst < 1e-6, "eps={eps}: pii defect {worst:e}");
            // The ladder residual itself is small along the run.
            for &t in &[-1.9, -0.7, 0.0, 1.1, 1.9] {
                let res = gambier_residual(t, &q0, &qhalf, eps).unwrap();
                assert!(res.abs() < 1e-8, "eps={eps}, t={t}: ladder residual {res:e}");
            }
        }
    }

    #[test]
    fn gambier_residual_out_of_table_errors() {
        let grid: Vec<f64> = (0..=10).map(|k| -0.5 + k as f64 * 0.1).collect();
        let zeros = vec![0.0; grid.len()];
        let tab = ScalarTable {
            grid,
            v: zeros.clone(),
            vp: zeros,
        };
        assert!(matches!(
            gambier_residual(20.0, &tab, &tab, 1.0),
            Err(Error::RangeError { .. })
        ));
        assert!(matches!(
            gambier_residual(0.0, &tab, &tab, 0.5),
            Err(Error::DomainError(_))
        ));
    }
}
