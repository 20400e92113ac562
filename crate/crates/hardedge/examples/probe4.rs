use hardedge::num::{integrate_ivp, Tolerances};
use hardedge::painleve3::{coupled_rhs, piii_rhs, CoupledState, Family, PIIIParams, PIIIVariant};
use hardedge::Result;

fn main() -> Result<()> {
    let a = 0.6;
    let (q0, y0) = (0.7, 0.8);
    for family in [Family::A, Family::B] {
        let params = PIIIParams::new(a, 1.0, PIIIVariant::theorem(family))?;
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
        let state_at = |t: f64, tol: Tolerances| -> Result<(f64, f64)> {
            if (t - 1.0).abs() < 1e-12 {
                return Ok((q0, y0));
            }
            let traj = integrate_ivp(rhs, 1.0, &[q0, y0], t, tol)?;
            let end = traj.states.last().expect("non-empty trajectory");
            Ok((end[0], end[1]))
        };
        // endpoint accuracy check at t=0.55
        let loose = state_at(0.55, tol_i)?;
        let tight = state_at(
            0.55,
            Tolerances {
                abs_tol: 1e-14,
                rel_tol: 5e-14,
                ..Tolerances::default()
            },
        )?;
        println!(
            "{family:?}: endpoint q diff {:.3e}, y diff {:.3e}",
            (loose.0 - tight.0).abs(),
            (loose.1 - tight.1).abs()
        );
        let yp_at = |t: f64| -> Result<f64> {
            let (q, y) = state_at(t, tol_i)?;
            Ok(coupled_rhs(&params, &CoupledState { t, q, y })?.1)
        };
        for h in [1e-3, 5e-4, 2.5e-4, 1.25e-4] {
            let mut worst = (0.0f64, 0.0f64);
            for i in 0..29 {
                let t = 0.55 + 1.4 * i as f64 / 28.0;
                let ypp_fd = (-yp_at(t + 2.0 * h)? + 8.0 * yp_at(t + h)? - 8.0 * yp_at(t - h)?
                    + yp_at(t - 2.0 * h)?)
                    / (12.0 * h);
                let (_, y) = state_at(t, tol_i)?;
                let ypp = piii_rhs(&params, t, y, yp_at(t)?)?;
                let d = (ypp_fd - ypp).abs();
                if d > worst.0 {
                    worst = (d, t);
                }
            }
            println!("{family:?} h={h:.0e}: worst {:.3e} at t={:.3}", worst.0, worst.1);
        }
    }
    Ok(())
}
