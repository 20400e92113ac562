//! Adaptive Dormand-Prince 5(4) integration with cubic-Hermite dense output.
//!
//! Every tabulated function of `t` in this crate (Painleve transcendents and
//! their companions, auxiliary exponentials, scaled-window trajectories) comes
//! out of [`integrate_ivp`] as a [`Trajectory`]: the accepted steps with state
//! and state derivative at each node, interpolable anywhere in between.
//! [`integrate_checkpoints`] is the memory-lean variant for large systems
//! (the PDE method of lines) that keeps only requested output slices.

use crate::error::{Error, Result};

/// Error-control knobs for adaptive integration and finite differences.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Absolute tolerance per step (component-wise).
    pub abs_tol: f64,
    /// Relative tolerance per step (component-wise).
    pub rel_tol: f64,
    /// Hard cap on accepted + rejected steps.
    pub max_steps: usize,
    /// Step used by finite-difference helpers built on top of trajectories.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_steps: 1_000_000,
            fd_step: 1e-5,
        }
    }
}

impl Tolerances {
    /// Same tolerances with both error targets tightened by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Tolerances {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            ..*self
        }
    }
}

/// Dense output of one ODE integration: strictly monotone nodes `s`, with the
/// state vector and its derivative at every node.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Node values of the independent variable, strictly monotone.
    pub s: Vec<f64>,
    /// State vector at each node.
    pub states: Vec<Vec<f64>>,
    /// State derivative (right-hand side) at each node.
    pub derivs: Vec<Vec<f64>>,
    /// Whether `s` increases along the node list.
    pub increasing: bool,
}

impl Trajectory {
    /// State dimension.
    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    /// First node abscissa.
    pub fn s_start(&self) -> f64 {
        *self.s.first().expect("trajectory has nodes")
    }

    /// Last node abscissa.
    pub fn s_end(&self) -> f64 {
        *self.s.last().expect("trajectory has nodes")
    }

    /// Smallest and largest covered abscissa, independent of direction.
    pub fn range(&self) -> (f64, f64) {
        if self.increasing {
            (self.s_start(), self.s_end())
        } else {
            (self.s_end(), self.s_start())
        }
    }

    fn bracket(&self, s: f64) -> Result<usize> {
        let (lo, hi) = self.range();
        let eps = 1e-12 * (1.0 + hi.abs().max(lo.abs()));
        if s < lo - eps || s > hi + eps {
            return Err(Error::RangeError { s, lo, hi });
        }
        // Binary search for the interval [s_i, s_{i+1}] (in node order) containing s.
        let n = self.s.len();
        let pos = |v: f64| if self.increasing { v } else { -v };
        let target = pos(s);
        let mut a = 0usize;
        let mut b = n - 1;
        while b - a > 1 {
            let m = (a + b) / 2;
            if pos(self.s[m]) <= target {
                a = m;
            } else {
                b = m;
            }
        }
        Ok(a)
    }

    /// Cubic-Hermite interpolation of the state at `s`.
    pub fn sample(&self, s: f64) -> Result<Vec<f64>> {
        Ok(self.sample_with_deriv(s)?.0)
    }

    /// Cubic-Hermite interpolation of state and derivative at `s`.
    ///
    /// The derivative is the exact derivative of the Hermite interpolant, so
    /// it is third-order accurate where the right-hand side is smooth.
    pub fn sample_with_deriv(&self, s: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let i = self.bracket(s)?;
        let (s0, s1) = (self.s[i], self.s[i + 1]);
        let h = s1 - s0;
        let u = (s - s0) / h;
        let (y0, y1) = (&self.states[i], &self.states[i + 1]);
        let (d0, d1) = (&self.derivs[i], &self.derivs[i + 1]);
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        let g00 = 6.0 * u * (u - 1.0) / h;
        let g10 = (1.0 - u) * (1.0 - 3.0 * u);
        let g01 = -6.0 * u * (u - 1.0) / h;
        let g11 = u * (3.0 * u - 2.0);
        let dim = y0.len();
        let mut val = vec![0.0; dim];
        let mut der = vec![0.0; dim];
        for k in 0..dim {
            val[k] = h00 * y0[k] + h10 * h * d0[k] + h01 * y1[k] + h11 * h * d1[k];
            der[k] = g00 * y0[k] + g10 * d0[k] + g01 * y1[k] + g11 * d1[k];
        }
        Ok((val, der))
    }

    /// Interior nodes (all but the first and last), as indices.
    pub fn interior(&self) -> std::ops::Range<usize> {
        1..self.s.len().saturating_sub(1)
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order solution weights (same as the last A row: FSAL).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
// Embedded 4th-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

struct Stepper<'a, F> {
    rhs: &'a mut F,
    tol: Tolerances,
    dim: usize,
    k: [Vec<f64>; 7],
    y_try: Vec<f64>,
    steps_used: usize,
}

impl<'a, F> Stepper<'a, F>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    fn new(rhs: &'a mut F, tol: Tolerances, dim: usize) -> Self {
        Stepper {
            rhs,
            tol,
            dim,
            k: std::array::from_fn(|_| vec![0.0; dim]),
            y_try: vec![0.0; dim],
            steps_used: 0,
        }
    }

    fn eval(&mut self, s: f64, y: &[f64], stage: usize) -> Result<()> {
        let mut out = std::mem::take(&mut self.k[stage]);
        (self.rhs)(s, y, &mut out)?;
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { s });
        }
        self.k[stage] = out;
        Ok(())
    }

    /// One attempted step from (s, y) with stride h; k[0] must hold f(s, y).
    /// Returns (error_ratio, y_new, f_new) where error_ratio <= 1 means accept.
    fn attempt(&mut self, s: f64, y: &[f64], h: f64) -> Result<f64> {
        for stage in 1..7 {
            for i in 0..self.dim {
                let mut acc = 0.0;
                for (j, a) in A[stage][..stage].iter().enumerate() {
                    acc += a * self.k[j][i];
                }
                self.y_try[i] = y[i] + h * acc;
            }
            let y_try = std::mem::take(&mut self.y_try);
            self.eval(s + C[stage] * h, &y_try, stage)?;
            self.y_try = y_try;
        }
        // 5th-order solution into y_try, scaled error estimate.
        let mut err_sq = 0.0;
        for i in 0..self.dim {
            let mut y5 = 0.0;
            let mut y4 = 0.0;
            for j in 0..7 {
                y5 += B5[j] * self.k[j][i];
                y4 += B4[j] * self.k[j][i];
            }
            let y_new = y[i] + h * y5;
            let scale = self.tol.abs_tol + self.tol.rel_tol * y[i].abs().max(y_new.abs());
            let e = h * (y5 - y4) / scale;
            err_sq += e * e;
            self.y_try[i] = y_new;
        }
        Ok((err_sq / self.dim as f64).sqrt())
    }
}

fn initial_step(span: f64) -> f64 {
    span / 100.0
}

/// Integrate `rhs` from `(s0, state0)` to `s1`, recording every accepted step.
///
/// `rhs(s, y, dy)` writes the derivative of `y` into `dy`. Integration is
/// adaptive with PI step-size control; the local error per step is held below
/// `tol`. The result is deterministic for fixed inputs.
pub fn integrate_ivp<F>(
    mut rhs: F,
    s0: f64,
    state0: &[f64],
    s1: f64,
    tol: Tolerances,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if s0 == s1 {
        return Err(Error::DomainError("integration span is empty (s0 = s1)".into()));
    }
    let mut out = Trajectory {
        s: Vec::new(),
        states: Vec::new(),
        derivs: Vec::new(),
        increasing: s1 > s0,
    };
    drive(&mut rhs, s0, state0, s1, tol, |s, y, f| {
        out.s.push(s);
        out.states.push(y.to_vec());
        out.derivs.push(f.to_vec());
    })?;
    Ok(out)
}

/// Integrate like [`integrate_ivp`] but keep only the slices at `outputs`
/// (which must be monotone from `s0` toward `s1`), interpolated on the fly.
/// Memory stays O(dim x outputs) regardless of step count.
pub fn integrate_checkpoints<F>(
    mut rhs: F,
    s0: f64,
    state0: &[f64],
    outputs: &[f64],
    tol: Tolerances,
) -> Result<Vec<(f64, Vec<f64>)>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    let s1 = *outputs
        .last()
        .ok_or_else(|| Error::DomainError("no output points requested".into()))?;
    let increasing = s1 > s0;
    let mut want = outputs.iter().copied().peekable();
    let mut result = Vec::with_capacity(outputs.len());
    let mut prev: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    drive(&mut rhs, s0, state0, s1, tol, |s, y, f| {
        if let Some((ps, py, pf)) = &prev {
            while let Some(&target) = want.peek() {
                let inside = if increasing {
                    target <= s + 1e-300
                } else {
                    target >= s - 1e-300
                };
                if !inside {
                    break;
                }
                let h = s - ps;
                let u = (target - ps) / h;
                let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
                let h10 = u * (1.0 - u) * (1.0 - u);
                let h01 = u * u * (3.0 - 2.0 * u);
                let h11 = u * u * (u - 1.0);
                let mut slice = vec![0.0; y.len()];
                for i in 0..y.len() {
                    slice[i] = h00 * py[i] + h10 * h * pf[i] + h01 * y[i] + h11 * h * f[i];
                }
                result.push((target, slice));
                want.next();
            }
        }
        prev = Some((s, y.to_vec(), f.to_vec()));
    })?;
    if want.peek().is_some() {
        return Err(Error::DomainError(
            "output points extend beyond the integration span".into(),
        ));
    }
    Ok(result)
}

/// Core adaptive loop; `on_accept(s, y, f)` fires at the initial point and at
/// every accepted step with the state and fresh derivative there.
fn drive<F, G>(
    rhs: &mut F,
    s0: f64,
    state0: &[f64],
    s1: f64,
    tol: Tolerances,
    mut on_accept: G,
) -> Result<()>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
    G: FnMut(f64, &[f64], &[f64]),
{
    let dim = state0.len();
    let dir = if s1 > s0 { 1.0 } else { -1.0 };
    let mut st = Stepper::new(rhs, tol, dim);
    let mut s = s0;
    let mut y = state0.to_vec();
    st.eval(s, &y, 0)?;
    on_accept(s, &y, &st.k[0]);
    let mut h = dir * initial_step((s1 - s0).abs());
    let mut err_prev: f64 = 1.0;
    const SAFETY: f64 = 0.9;
    const MIN_SCALE: f64 = 0.2;
    const MAX_SCALE: f64 = 6.0;
    while (s1 - s) * dir > 0.0 {
        if st.steps_used >= tol.max_steps {
            return Err(Error::StepLimitExceeded {
                max_steps: tol.max_steps,
            });
        }
        st.steps_used += 1;
        if (s + h - s1) * dir > 0.0 {
            h = s1 - s;
        }
        if h.abs() < 1e-14 * (1.0 + s.abs()) {
            return Err(Error::ConvergenceFailed(format!(
                "step size underflow at s = {s:e}"
            )));
        }
        let err = st.attempt(s, &y, h)?;
        if err <= 1.0 {
            // Accept: FSAL gives the new derivative in stage 6.
            s += h;
            std::mem::swap(&mut y, &mut st.y_try);
            st.k.swap(0, 6);
            on_accept(s, &y, &st.k[0]);
            // PI controller.
            let scale = (SAFETY * err.max(1e-10).powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0))
                .clamp(MIN_SCALE, MAX_SCALE);
            err_prev = err.max(1e-10);
            h *= scale;
        } else {
            let scale = (SAFETY * err.powf(-1.0 / 5.0)).clamp(MIN_SCALE, 1.0);
            h *= scale;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_growth_matches_closed_form() {
        let traj = integrate_ivp(
            |_s, y, dy| {
                dy[0] = y[0];
                Ok(())
            },
            0.0,
            &[1.0],
            1.0,
            Tolerances::default(),
        )
        .unwrap();
        assert_relative_eq!(
            traj.states.last().unwrap()[0],
            2.718281828459045,
            max_relative = 1e-9
        );
    }

    #[test]
    fn gaussian_decay_matches_closed_form() {
        let traj = integrate_ivp(
            |s, y, dy| {
                dy[0] = -2.0 * s * y[0];
                Ok(())
            },
            0.0,
            &[1.0],
            1.0,
            Tolerances::default(),
        )
        .unwrap();
        assert_relative_eq!(
            traj.states.last().unwrap()[0],
            (-1.0_f64).exp(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let tol = Tolerances::default();
        let traj = integrate_ivp(
            |_s, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
                Ok(())
            },
            0.0,
            &[1.0, 0.0],
            20.0,
            tol,
        )
        .unwrap();
        for st in &traj.states {
            let energy = st[0] * st[0] + st[1] * st[1];
            assert!((energy - 1.0).abs() < 10.0 * tol.rel_tol * 20.0);
        }
    }

    #[test]
    fn dense_output_interpolates_smoothly() {
        let traj = integrate_ivp(
            |s, y, dy| {
                dy[0] = s.cos() * y[0] / (1.0 + s * s) + s.sin();
                Ok(())
            },
            0.0,
            &[0.3],
            5.0,
            Tolerances::default(),
        )
        .unwrap();
        // Interpolated values must agree with a direct integration to each point.
        for &probe in &[0.37, 1.91, 3.3, 4.99] {
            let direct = integrate_ivp(
                |s, y, dy| {
                    dy[0] = s.cos() * y[0] / (1.0 + s * s) + s.sin();
                    Ok(())
                },
                0.0,
                &[0.3],
                probe,
                Tolerances::default(),
            )
            .unwrap();
            let dense = traj.sample(probe).unwrap()[0];
            assert_relative_eq!(
                dense,
                direct.states.last().unwrap()[0],
                max_relative = 1e-7
            );
        }
    }

    #[test]
    fn reverse_integration_recovers_initial_state() {
        let tol = Tolerances::default();
        let fwd = integrate_ivp(
            |s, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0] - 0.1 * y[1] + s.sin();
                Ok(())
            },
            0.0,
            &[0.7, -0.2],
            6.0,
            tol,
        )
        .unwrap();
        let end = fwd.states.last().unwrap().clone();
        let back = integrate_ivp(
            |s, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0] - 0.1 * y[1] + s.sin();
                Ok(())
            },
            6.0,
            &end,
            0.0,
            tol,
        )
        .unwrap();
        let rec = back.states.last().unwrap();
        assert!((rec[0] - 0.7).abs() < 100.0 * tol.rel_tol.max(tol.abs_tol) * 10.0);
        assert!((rec[1] + 0.2).abs() < 100.0 * tol.rel_tol.max(tol.abs_tol) * 10.0);
    }

    #[test]
    fn tighter_tolerance_is_at_least_as_accurate() {
        let run = |tol: Tolerances| -> f64 {
            integrate_ivp(
                |s, y, dy| {
                    dy[0] = -y[0] * s.cos() + s;
                    Ok(())
                },
                0.0,
                &[1.0],
                8.0,
                tol,
            )
            .unwrap()
            .states
            .last()
            .unwrap()[0]
        };
        let reference = run(Tolerances::default().tightened(1e3));
        let loose = (run(Tolerances {
            abs_tol: 1e-6,
            rel_tol: 1e-6,
            ..Tolerances::default()
        }) - reference)
            .abs();
        let tight = (run(Tolerances {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            ..Tolerances::default()
        }) - reference)
            .abs();
        assert!(tight <= loose + 1e-14);
    }

    #[test]
    fn checkpoints_match_dense_trajectory() {
        let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
            dy[0] = y[1];
            dy[1] = -s * y[0];
            Ok(())
        };
        let traj = integrate_ivp(rhs, 0.0, &[1.0, 0.5], 10.0, Tolerances::default()).unwrap();
        let outs: Vec<f64> = (1..=20).map(|i| i as f64 * 0.5).collect();
        let cps = integrate_checkpoints(rhs, 0.0, &[1.0, 0.5], &outs, Tolerances::default())
            .unwrap();
        assert_eq!(cps.len(), outs.len());
        for (s, slice) in &cps {
            let dense = traj.sample(*s).unwrap();
            assert_relative_eq!(slice[0], dense[0], max_relative = 1e-8, epsilon = 1e-10);
        }
    }

    #[test]
    fn decreasing_direction_is_supported() {
        let traj = integrate_ivp(
            |_s, y, dy| {
                dy[0] = y[0];
                Ok(())
            },
            1.0,
            &[1.0],
            0.0,
            Tolerances::default(),
        )
        .unwrap();
        assert!(!traj.increasing);
        assert_relative_eq!(
            traj.states.last().unwrap()[0],
            (-1.0_f64).exp(),
            max_relative = 1e-9
        );
        // Sampling works in the decreasing direction too.
        let mid = traj.sample(0.5).unwrap()[0];
        assert_relative_eq!(mid, (-0.5_f64).exp(), max_relative = 1e-7);
    }

    #[test]
    fn step_limit_is_enforced() {
        let err = integrate_ivp(
            |_s, y, dy| {
                dy[0] = y[0] * y[0];
                Ok(())
            },
            0.0,
            &[1.0],
            10.0,
            Tolerances {
                max_steps: 50,
                ..Tolerances::default()
            },
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::StepLimitExceeded { .. } | Error::ConvergenceFailed(_) | Error::NonFiniteState { .. }
        ));
    }

    #[test]
    fn sample_outside_range_errors() {
        let traj = integrate_ivp(
            |_s, y, dy| {
                dy[0] = y[0];
                Ok(())
            },
            0.0,
            &[1.0],
            1.0,
            Tolerances::default(),
        )
        .unwrap();
        assert!(matches!(traj.sample(2.0), Err(Error::RangeError { .. })));
    }
}
