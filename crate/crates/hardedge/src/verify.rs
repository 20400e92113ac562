//! The acceptance suite as a library: eleven numbered checks, each packaged
//! as a function returning a [`CriterionReport`] with its measured values,
//! shared by the integration-test target and the command-line `verify-all`.
//!
//! Every check is deterministic (fixed generator seeds) and self-contained;
//! [`run_all`] executes them in order and converts internal errors into
//! failed reports rather than aborting the suite.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fp::{
    compare_fields, gumbel_aux_residuals, gumbel_eval, gumbel_ratio_residual, solve_fp, FPGrid,
};
use crate::lax::{
    antidiag_identity_residual, assemble_soft_thm4, assemble_soft_thm5, assemble_thm1a,
    assemble_thm1b, assemble_thm2, assemble_thm3, beta2_flow_provider, beta4_flow_provider,
    fp_compat_matrix, propagate_eigvec, soft_spm_tables, zero_curvature_residual, EigvecState,
    LaxAssembly, Leg, Path,
};
use crate::limits::{limit_sweep, Window};
use crate::mc::{empirical_cdf, ks_distance, sample_smallest, sample_smallest_dense_oracle,
    EnsembleSpec};
use crate::num::{airy_ai, integrate_ivp, Tolerances};
use crate::painleve2::{
    gambier_half_table, gambier_residual, p34_residual, pii_general_rhs, pii_rhs,
    solve_hastings_mcleod, HMSolution,
};
use crate::painleve3::{
    coupled_rhs, cross_a_partner, piii_rhs, CoupledState, Family, PIIIParams, PIIIVariant,
};

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    /// Position in the suite (1-based).
    pub id: usize,
    /// Short name of the property checked.
    pub name: &'static str,
    /// Whether every measured quantity met its bound.
    pub passed: bool,
    /// The measured quantities with their bounds, for the human reading the
    /// log.
    pub details: String,
}

impl CriterionReport {
    /// One-line rendering: `PASS  3  closed-form auxiliary identities  (...)`.
    pub fn line(&self) -> String {
        format!(
            "{}  {:>2}  {}  ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.details
        )
    }
}

/// The separatrix table shared by the checks that need one: solved once on
/// `[-6, 8]` at the standard tolerance.
fn shared_hm() -> Result<&'static HMSolution> {
    static HM: OnceLock<std::result::Result<HMSolution, Error>> = OnceLock::new();
    match HM.get_or_init(|| solve_hastings_mcleod(-6.0, 8.0, 1e-12)) {
        Ok(h) => Ok(h),
        Err(e) => Err(e.clone()),
    }
}

/// Scale-invariant discrepancy between two propagated eigenvector states.
fn state_distance(a: EigvecState, b: EigvecState) -> f64 {
    let scale = a
        .f
        .abs()
        .max(a.g.abs())
        .max(b.f.abs())
        .max(b.g.abs())
        .max(1e-30);
    (a.f - b.f).abs().max((a.g - b.g).abs()) / scale
}

/// Two-path discrepancy of eigenvector propagation around one rectangle.
fn rectangle_discrepancy(
    asm: &dyn LaxAssembly,
    t0: f64,
    x0: f64,
    t1: f64,
    x1: f64,
    s0: EigvecState,
) -> Result<f64> {
    let via_x = propagate_eigvec(
        asm,
        &Path {
            t0,
            x0,
            legs: vec![Leg::InX(x1), Leg::InT(t1)],
        },
        s0,
    )?;
    let via_t = propagate_eigvec(
        asm,
        &Path {
            t0,
            x0,
            legs: vec![Leg::InT(t1), Leg::InX(x1)],
        },
        s0,
    )?;
    Ok(state_distance(via_x, via_t))
}

/// Check 1: the explicit pair is flat for arbitrary smooth data, and its
/// compatibility operator's top row vanishes exactly at the pair's own
/// parameter point.
///
/// Ten random trigonometric/exponential `(r, phi)` pairs with random
/// coupling; for each, the flatness residual over a 20x20 grid on
/// `[0.5, 2]^2` must stay below `1e-10`, the top row below `1e-9` at the
/// matched parameters, and the top row must rebound above `1e-3` when the
/// coupling is perturbed by `0.1`.
pub fn criterion_1_explicit_pair_identity() -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac01);
    let mut worst_flat = 0.0_f64;
    let mut worst_top = 0.0_f64;
    let mut weakest_dichotomy = f64::INFINITY;
    for _ in 0..10 {
        let c0 = 1.5 + rng.gen::<f64>();
        let c1 = -0.5 + rng.gen::<f64>();
        let c2 = -0.5 + rng.gen::<f64>();
        let w1 = 0.5 + 1.5 * rng.gen::<f64>();
        let w2 = 0.5 + 1.5 * rng.gen::<f64>();
        let p1 = std::f64::consts::TAU * rng.gen::<f64>();
        let d0 = -0.5 + rng.gen::<f64>();
        let d1 = -0.5 + rng.gen::<f64>();
        let w3 = 0.5 + 1.5 * rng.gen::<f64>();
        let p3 = std::f64::consts::TAU * rng.gen::<f64>();
        let kappa = 0.5 + 1.5 * rng.gen::<f64>();
        let asm = assemble_thm3(
            kappa,
            move |t: f64| {
                Ok((
                    c0 + c1 * (w1 * t + p1).sin() + c2 * (w2 * t).cos(),
                    c1 * w1 * (w1 * t + p1).cos() - c2 * w2 * (w2 * t).sin(),
                ))
            },
            move |t: f64| {
                let e = (d0 + d1 * (w3 * t + p3).sin()).exp();
                Ok((e, e * d1 * w3 * (w3 * t + p3).cos()))
            },
        )?;
        for i in 0..20 {
            for j in 0..20 {
                let t = 0.5 + 1.5 * i as f64 / 19.0;
                let x = 0.5 + 1.5 * j as f64 / 19.0;
                worst_flat = worst_flat.max(zero_curvature_residual(&asm, t, x)?.norm_inf());
            }
        }
        let a = 2.0 - kappa;
        for i in 0..10 {
            let t = 0.5 + 1.5 * i as f64 / 9.0;
            let x = 0.5 + 1.5 * (9 - i) as f64 / 9.0;
            worst_top = worst_top.max(fp_compat_matrix(&asm, kappa, a, t, x)?.top_row_norm());
            weakest_dichotomy = weakest_dichotomy
                .min(fp_compat_matrix(&asm, kappa + 0.1, a, t, x)?.top_row_norm());
        }
    }
    let passed = worst_flat <= 1e-10 && worst_top <= 1e-9 && weakest_dichotomy >= 1e-3;
    Ok(CriterionReport {
        id: 1,
        name: "explicit pair: flatness and parameter dichotomy",
        passed,
        details: format!(
            "flatness {worst_flat:.2e} (<=1e-10), matched top row {worst_top:.2e} (<=1e-9), \
             perturbed top row {weakest_dichotomy:.2e} (>=1e-3), 10 random data pairs"
        ),
    })
}

/// Check 2: the PDE solver reproduces the closed-form distribution at the
/// matched parameter point, and refining the grid improves the distance.
///
/// A 200x200 log-spaced grid must land within `1e-3` sup-norm of the closed
/// form on interior nodes; doubling both directions must shrink the distance
/// by at least 1.8x.
pub fn criterion_2_closed_form_vs_pde() -> Result<CriterionReport> {
    let tol = Tolerances {
        abs_tol: 1e-10,
        rel_tol: 1e-8,
        ..Tolerances::default()
    };
    let reference = |t: f64, x: f64| gumbel_eval(1.0, t, x).expect("positive grid");
    let coarse = FPGrid::log_spaced(200, 0.05, 8.0, 200, 50.0, 0.1)?;
    let d200 = compare_fields(&solve_fp(1.0, 1.0, &coarse, tol)?, reference, false);
    let fine = FPGrid::log_spaced(400, 0.05, 8.0, 400, 50.0, 0.1)?;
    let d400 = compare_fields(&solve_fp(1.0, 1.0, &fine, tol)?, reference, false);
    let ratio = d200.sup / d400.sup;
    let passed = d200.sup <= 1e-3 && ratio >= 1.8;
    Ok(CriterionReport {
        id: 2,
        name: "PDE solver vs closed form with grid refinement",
        passed,
        details: format!(
            "sup distance {:.2e} at 200x200 (<=1e-3), refinement ratio {ratio:.2} (>=1.8)",
            d200.sup
        ),
    })
}

/// Check 3: the four auxiliary identities of the closed form (full PDE,
/// first-order transport, pure-x factorization, derivative proportionality)
/// hold to `1e-12` at 100 random parameter/coordinate triples.
pub fn criterion_3_closed_form_identities() -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac03);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let kappa = 0.5 + 2.0 * rng.gen::<f64>();
        let t = 0.2 + 3.0 * rng.gen::<f64>();
        let x = 0.2 + 3.0 * rng.gen::<f64>();
        let (r_fp, r_tr, r_sec) = gumbel_aux_residuals(kappa, t, x)?;
        let r_ratio = gumbel_ratio_residual(kappa, t, x)?;
        worst = worst
            .max(r_fp.abs())
            .max(r_tr.abs())
            .max(r_sec.abs())
            .max(r_ratio.abs());
    }
    Ok(CriterionReport {
        id: 3,
        name: "closed-form auxiliary identities",
        passed: worst <= 1e-12,
        details: format!("worst of four residuals {worst:.2e} (<=1e-12), 100 random triples"),
    })
}

/// Check 4: the coupling-2 hard pairs along consistent trajectories on
/// `t` in `[0.5, 2]`: the eliminated scalar equation holds, both pairs are
/// flat, the compatibility top row vanishes at coupling 1, and the
/// parameter-reflection identities hold against an independently integrated
/// partner flow.
pub fn criterion_4_coupling2_hard_pairs() -> Result<CriterionReport> {
    let a = 0.6;
    let (q0, y0, phi0) = (0.7, 0.8, 1.3);
    let mut worst_scalar = 0.0_f64;
    let mut worst_flat = 0.0_f64;
    let mut worst_top = 0.0_f64;
    let mut worst_cross = 0.0_f64;
    for family in [Family::A, Family::B] {
        let params = PIIIParams::new(a, 1.0, PIIIVariant::theorem(family))?;
        let prov = beta2_flow_provider(params, 1.0, q0, y0, phi0, 0.5, 2.0)?;

        // (i) eliminated scalar equation: y'' from a five-point stencil of
        // the flow's own y' against the scalar right-hand side.  Each stencil
        // point is reached by a fresh integration from the seed (the driver
        // lands exactly on the endpoint), because the stencil divides any
        // dense-output interpolation error by the step and would otherwise
        // dominate the defect being measured.
        let tol_i = Tolerances {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            ..Tolerances::default()
        };
        let rhs = |t: f64, s: &[f64], ds: &mut [f64]| -> Result<()> {
            let (qp, yp) = coupled_rhs(&params, &CoupledState { t, q: s[0], y: s[1] })?;
            ds[0] = qp;
            ds[1] = yp;
            Ok(())
        };
        let state_at = |t: f64| -> Result<(f64, f64)> {
            if (t - 1.0).abs() < 1e-12 {
                return Ok((q0, y0));
            }
            let traj = integrate_ivp(rhs, 1.0, &[q0, y0], t, tol_i)?;
            let end = traj.states.last().expect("non-empty trajectory");
            Ok((end[0], end[1]))
        };
        let yp_at = |t: f64| -> Result<f64> {
            let (q, y) = state_at(t)?;
            Ok(coupled_rhs(&params, &CoupledState { t, q, y })?.1)
        };
        let h = 2.5e-4;
        for i in 0..29 {
            let t = 0.55 + 1.4 * i as f64 / 28.0;
            let ypp_fd = (-yp_at(t + 2.0 * h)? + 8.0 * yp_at(t + h)? - 8.0 * yp_at(t - h)?
                + yp_at(t - 2.0 * h)?)
                / (12.0 * h);
            let (_, y) = state_at(t)?;
            let ypp = piii_rhs(&params, t, y, yp_at(t)?)?;
            worst_scalar = worst_scalar.max((ypp_fd - ypp).abs());
        }

        // (ii)+(iii) flatness and compatibility along the same flow.
        let prov2 = beta2_flow_provider(params, 1.0, q0, y0, phi0, 0.5, 2.0)?;
        let asm = match family {
            Family::A => assemble_thm1a(a, prov2)?,
            Family::B => assemble_thm1b(a, prov2)?,
        };
        let asm: &dyn LaxAssembly = &asm;
        let spec = asm.compat_spec();
        for i in 0..15 {
            let t = 0.55 + 1.4 * i as f64 / 14.0;
            for &x in &[0.6, 0.9, 1.2, 1.5, 1.8] {
                worst_flat = worst_flat.max(zero_curvature_residual(asm, t, x)?.norm_inf());
                worst_top =
                    worst_top.max(fp_compat_matrix(asm, spec.kappa, spec.a, t, x)?.top_row_norm());
            }
        }

        // (iv) parameter reflection: integrate the partner flow at the
        // reflected parameter from the constructed seed and compare the
        // whole runs.
        let (qsq0, yp0) = cross_a_partner(1.0, a, q0, y0)?;
        let params_p = PIIIParams::new(1.0 - a, 1.0, PIIIVariant::theorem(family))?;
        let partner = beta2_flow_provider(params_p, 1.0, qsq0.sqrt(), yp0, 1.0, 0.5, 2.0)?;
        for i in 0..31 {
            let t = 0.5 + 1.5 * i as f64 / 30.0;
            let b = prov(t)?;
            let p = partner(t)?;
            let (qsq_c, y_c) = cross_a_partner(t, a, b.q, b.y)?;
            worst_cross = worst_cross
                .max((p.y - y_c).abs())
                .max((p.q * p.q - qsq_c).abs());
        }
    }
    let passed =
        worst_scalar <= 1e-6 && worst_flat <= 1e-6 && worst_top <= 1e-6 && worst_cross <= 1e-6;
    Ok(CriterionReport {
        id: 4,
        name: "coupling-2 hard pairs along trajectories",
        passed,
        details: format!(
            "scalar defect {worst_scalar:.2e}, flatness {worst_flat:.2e}, top row \
             {worst_top:.2e}, reflection defect {worst_cross:.2e} (all <=1e-6, both families)"
        ),
    })
}

/// Check 5: the coupling-4 hard pair: the product `S+ S- - (1 - q^2)` is
/// conserved along the flow to `1e-8`, and the pair is flat with vanishing
/// compatibility top row at coupling 2.
pub fn criterion_5_coupling4_hard_pair() -> Result<CriterionReport> {
    let a = 0.9;
    let prov = beta4_flow_provider(a, 1.0, 0.5, 0.3, 0.8, 0.5, 2.0)?;
    let mut worst_drift = 0.0_f64;
    for i in 0..31 {
        let t = 0.5 + 1.5 * i as f64 / 30.0;
        let s = prov(t)?;
        worst_drift = worst_drift.max((s.s_plus * s.s_minus - (1.0 - s.q * s.q)).abs());
    }
    let prov2 = beta4_flow_provider(a, 1.0, 0.5, 0.3, 0.8, 0.5, 2.0)?;
    let asm = assemble_thm2(a, prov2);
    let spec = asm.compat_spec();
    let mut worst_flat = 0.0_f64;
    let mut worst_top = 0.0_f64;
    for i in 0..15 {
        let t = 0.55 + 1.4 * i as f64 / 14.0;
        for &x in &[0.6, 0.9, 1.2, 1.5, 1.8] {
            worst_flat = worst_flat.max(zero_curvature_residual(&asm, t, x)?.norm_inf());
            worst_top =
                worst_top.max(fp_compat_matrix(&asm, spec.kappa, spec.a, t, x)?.top_row_norm());
        }
    }
    let passed = worst_drift <= 1e-8 && worst_flat <= 1e-6 && worst_top <= 1e-6;
    Ok(CriterionReport {
        id: 5,
        name: "coupling-4 hard pair and product conservation",
        passed,
        details: format!(
            "product drift {worst_drift:.2e} (<=1e-8), flatness {worst_flat:.2e}, top row \
             {worst_top:.2e} (<=1e-6), coupling {}",
            spec.kappa
        ),
    })
}

/// Check 6: the separatrix solution: origin value against the tightened
/// shooting oracle, right-tail decay against the Airy function, the
/// companion-flow identity, the once-integrated second-order form, and the
/// half-parameter ladder construct-then-verify residual.
pub fn criterion_6_separatrix_solution() -> Result<CriterionReport> {
    let hm = shared_hm()?;
    let q0 = hm.sample_q(0.0)?;
    let origin_err = (q0 - 0.36706).abs();
    let oracle = solve_hastings_mcleod(-6.0, 10.0, 1e-13)?;
    let oracle_gap = (q0 - oracle.sample_q(0.0)?).abs();
    let (ai6, _) = airy_ai(6.0)?;
    let airy_err = (hm.sample_q(6.0)? / ai6 - 1.0).abs();
    let u_defect = crate::painleve2::u_check(hm);
    let mut worst_p34 = 0.0_f64;
    for i in (0..hm.grid.len()).step_by(61) {
        let (t, q, qp) = (hm.grid[i], hm.q[i], hm.qp[i]);
        let r = 2.0 * q * q;
        let rp = 4.0 * q * qp;
        let rpp = 4.0 * qp * qp + 4.0 * q * pii_rhs(t, q);
        worst_p34 = worst_p34.max(p34_residual(t, r, rp, rpp).abs());
    }
    let q0_table = hm.to_table();
    let mut worst_ladder = 0.0_f64;
    for eps in [1.0, -1.0] {
        let qhalf = gambier_half_table(&q0_table, eps, -2.0, 2.0)?;
        let h = qhalf.grid[1] - qhalf.grid[0];
        for i in 2..qhalf.grid.len() - 2 {
            let qpp = (-qhalf.vp[i + 2] + 8.0 * qhalf.vp[i + 1] - 8.0 * qhalf.vp[i - 1]
                + qhalf.vp[i - 2])
                / (12.0 * h);
            let res = qpp - pii_general_rhs(qhalf.grid[i], qhalf.v[i], -eps / 2.0);
            worst_ladder = worst_ladder.max(res.abs());
        }
        for &t in &[-1.9, -0.7, 0.0, 1.1, 1.9] {
            worst_ladder = worst_ladder.max(gambier_residual(t, &q0_table, &qhalf, eps)?.abs());
        }
    }
    let passed = origin_err <= 1e-4
        && oracle_gap <= 1e-6
        && airy_err <= 1e-4
        && u_defect <= 1e-6
        && worst_p34 <= 1e-6
        && worst_ladder <= 1e-6;
    Ok(CriterionReport {
        id: 6,
        name: "separatrix solution checks",
        passed,
        details: format!(
            "origin |q(0)-0.36706| {origin_err:.2e} (<=1e-4, oracle gap {oracle_gap:.2e}), \
             Airy ratio defect {airy_err:.2e} (<=1e-4), companion defect {u_defect:.2e}, \
             second-order form {worst_p34:.2e}, ladder {worst_ladder:.2e} (<=1e-6)"
        ),
    })
}

/// Check 7: the scaling-limit pairs built from separatrix data are flat and
/// compatibility-exact on the square `[-2, 2]^2`.
pub fn criterion_7_scaling_limit_pairs() -> Result<CriterionReport> {
    let hm = shared_hm()?;
    let a4 = assemble_soft_thm4(hm.clone());
    let (sp, sm) = soft_spm_tables(hm)?;
    let a5 = assemble_soft_thm5(hm.clone(), sp, sm)?;
    let assemblies: [&dyn LaxAssembly; 2] = [&a4, &a5];
    let mut worst_flat = 0.0_f64;
    let mut worst_top = 0.0_f64;
    for asm in assemblies {
        let spec = asm.compat_spec();
        for i in 0..9 {
            for j in 0..9 {
                let t = -2.0 + 4.0 * i as f64 / 8.0;
                let x = -2.0 + 4.0 * j as f64 / 8.0;
                worst_flat = worst_flat.max(zero_curvature_residual(asm, t, x)?.norm_inf());
                worst_top =
                    worst_top.max(fp_compat_matrix(asm, spec.kappa, 0.0, t, x)?.top_row_norm());
            }
        }
    }
    let passed = worst_flat <= 1e-6 && worst_top <= 1e-6;
    Ok(CriterionReport {
        id: 7,
        name: "scaling-limit pairs from separatrix data",
        passed,
        details: format!(
            "flatness {worst_flat:.2e}, top row {worst_top:.2e} (<=1e-6, both pairs, \
             9x9 grid on [-2,2]^2)"
        ),
    })
}

/// Check 8: the hard-to-soft convergence sweep: every measured column
/// strictly decreases along scales `1e2, 1e3, 1e4`, and the infinite-scale
/// fixtures sit at numerical zero.
pub fn criterion_8_convergence_sweep() -> Result<CriterionReport> {
    let hm = shared_hm()?;
    let tol = Tolerances {
        abs_tol: 1e-12,
        rel_tol: 1e-11,
        ..Tolerances::default()
    };
    let report = limit_sweep(&[1e2, 1e3, 1e4], hm, &Window::default(), tol)?;
    let decreasing = report.strictly_decreasing();
    let fx = &report.fixture;
    let fixture_worst = fx.ode_residual.max(fx.thm4_distance).max(fx.thm5_distance);
    let last = report.records.last().expect("three records");
    let passed = decreasing && fixture_worst <= 1e-6;
    Ok(CriterionReport {
        id: 8,
        name: "hard-to-soft convergence sweep",
        passed,
        details: format!(
            "all six columns strictly decreasing over alpha 1e2,1e3,1e4: {decreasing}; \
             final distances {:.2e}/{:.2e}, fixtures {fixture_worst:.2e} (<=1e-6)",
            last.thm4_l_distance.max(last.thm4_b_distance),
            last.thm5_l_distance.max(last.thm5_b_distance)
        ),
    })
}

/// Check 9: eigenvector propagation is path-independent (two-path rectangle
/// discrepancy at most `1e-5`) for one representative of every assembly
/// family used in checks 1, 4, 5, and 7.
pub fn criterion_9_path_independence() -> Result<CriterionReport> {
    let mut worst = 0.0_f64;
    let s0 = EigvecState { f: 1.0, g: 0.3 };

    let a3 = assemble_thm3(
        1.45,
        |t| Ok((2.0 + t.sin(), t.cos())),
        |t| Ok((t.exp(), t.exp())),
    )?;
    worst = worst.max(rectangle_discrepancy(&a3, 1.0, 0.8, 1.6, 1.5, s0)?);

    let a = 0.6;
    let params_a = PIIIParams::new(a, 1.0, PIIIVariant::theorem(Family::A))?;
    let prov_a = beta2_flow_provider(params_a, 1.0, 0.7, 0.8, 1.3, 0.5, 2.0)?;
    let a1a = assemble_thm1a(a, prov_a)?;
    worst = worst.max(rectangle_discrepancy(&a1a, 1.0, 0.8, 1.6, 1.5, s0)?);

    let params_b = PIIIParams::new(a, 1.0, PIIIVariant::theorem(Family::B))?;
    let prov_b = beta2_flow_provider(params_b, 1.0, 0.7, 0.8, 1.3, 0.5, 2.0)?;
    let a1b = assemble_thm1b(a, prov_b)?;
    worst = worst.max(rectangle_discrepancy(&a1b, 1.0, 0.8, 1.6, 1.5, s0)?);

    let prov_4 = beta4_flow_provider(0.9, 1.0, 0.5, 0.3, 0.8, 0.5, 2.0)?;
    let a2 = assemble_thm2(0.9, prov_4);
    worst = worst.max(rectangle_discrepancy(&a2, 1.0, 0.8, 1.6, 1.5, s0)?);

    let hm = shared_hm()?;
    let a4 = assemble_soft_thm4(hm.clone());
    worst = worst.max(rectangle_discrepancy(&a4, 0.0, 0.5, 1.0, 1.2, s0)?);
    let (sp, sm) = soft_spm_tables(hm)?;
    let a5 = assemble_soft_thm5(hm.clone(), sp, sm)?;
    worst = worst.max(rectangle_discrepancy(&a5, 0.0, 0.5, 1.0, 1.2, s0)?);

    Ok(CriterionReport {
        id: 9,
        name: "eigenvector path independence",
        passed: worst <= 1e-5,
        details: format!("worst two-path discrepancy {worst:.2e} (<=1e-5, six assemblies)"),
    })
}

/// Check 10: the tridiagonal ensemble sampler against the dense oracle:
/// Kolmogorov-Smirnov distance at most 0.03 at coupling 2 with `10^4`
/// replicas, every sample positive, and bitwise reproducibility under a
/// fixed seed.
pub fn criterion_10_ensemble_sampler() -> Result<CriterionReport> {
    let spec = EnsembleSpec::new(6, 2.0, 0.0, 2024)?;
    let replicas = 10_000;
    let tri = sample_smallest(&spec, replicas)?;
    let again = sample_smallest(&spec, replicas)?;
    let reproducible = tri == again;
    let all_positive = tri.iter().all(|v| v.is_finite() && *v > 0.0);
    let dense = sample_smallest_dense_oracle(&spec, replicas)?;
    let ks = ks_distance(&empirical_cdf(&tri)?, &empirical_cdf(&dense)?);
    let passed = reproducible && all_positive && ks <= 0.03;
    Ok(CriterionReport {
        id: 10,
        name: "ensemble sampler vs dense oracle",
        passed,
        details: format!(
            "KS distance {ks:.4} (<=0.03, {replicas} replicas), positive samples: \
             {all_positive}, bitwise reproducible: {reproducible}"
        ),
    })
}

/// Check 11: the antidiagonal bracket identity holds to `1e-10` on 1000
/// random antidiagonal pairs.
pub fn criterion_11_antidiagonal_identity() -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xac0b);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let p_plus = -5.0 + 10.0 * rng.gen::<f64>();
        let p_minus = -5.0 + 10.0 * rng.gen::<f64>();
        let q_plus = -5.0 + 10.0 * rng.gen::<f64>();
        let q_minus = -5.0 + 10.0 * rng.gen::<f64>();
        worst = worst.max(antidiag_identity_residual(p_plus, p_minus, q_plus, q_minus));
    }
    Ok(CriterionReport {
        id: 11,
        name: "antidiagonal bracket identity",
        passed: worst <= 1e-10,
        details: format!("worst residual {worst:.2e} (<=1e-10, 1000 random pairs)"),
    })
}

/// Run the whole suite in order; a check that errors internally becomes a
/// failed report carrying the error text.
pub fn run_all() -> Vec<CriterionReport> {
    let checks: [(usize, &'static str, fn() -> Result<CriterionReport>); 11] = [
        (
            1,
            "explicit pair: flatness and parameter dichotomy",
            criterion_1_explicit_pair_identity,
        ),
        (
            2,
            "PDE solver vs closed form with grid refinement",
            criterion_2_closed_form_vs_pde,
        ),
        (
            3,
            "closed-form auxiliary identities",
            criterion_3_closed_form_identities,
        ),
        (
            4,
            "coupling-2 hard pairs along trajectories",
            criterion_4_coupling2_hard_pairs,
        ),
        (
            5,
            "coupling-4 hard pair and product conservation",
            criterion_5_coupling4_hard_pair,
        ),
        (6, "separatrix solution checks", criterion_6_separatrix_solution),
        (
            7,
            "scaling-limit pairs from separatrix data",
            criterion_7_scaling_limit_pairs,
        ),
        (8, "hard-to-soft convergence sweep", criterion_8_convergence_sweep),
        (9, "eigenvector path independence", criterion_9_path_independence),
        (10, "ensemble sampler vs dense oracle", criterion_10_ensemble_sampler),
        (
            11,
            "antidiagonal bracket identity",
            criterion_11_antidiagonal_identity,
        ),
    ];
    checks
        .into_iter()
        .map(|(id, name, f)| match f() {
            Ok(rep) => rep,
            Err(e) => CriterionReport {
                id,
                name,
                passed: false,
                details: format!("errored: {e}"),
            },
        })
        .collect()
}
