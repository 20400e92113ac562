//! The six concrete pair assemblies.
//!
//! Each assembly owns a provider for the scalar solution data it is built
//! from and evaluates its coefficient matrices over jets, so the
//! t-derivatives of all entries are exact chain-rule propagations through the
//! governing flow equations. Providers are sampled at face value: feeding
//! inconsistent data is allowed (and used by the defect-detection tests) —
//! the residual engines will report the inconsistency rather than mask it.

use crate::error::{Error, Result, SINGULAR_BAND};
use crate::num::{fd_partial, integrate_checkpoints, integrate_ivp, Jet, Tolerances};
use crate::painleve2::{pii_rhs, HMSolution, ScalarTable};
use crate::painleve3::{
    coupled_rhs, h0_eval, h_aux, spm_rhs, tw_rhs, CoupledState, Family, PIIIParams, PIIIVariant,
    SPMState,
};

use super::matrix::{JetMat, JetPoles, Matrix2, PolePowers};
use super::{CompatMode, CompatSpec, LaxAssembly};

/// Scalar data of the coupling-2 hard-edge pairs at one time: the
/// Tracy-Widom-type function `q`, the logarithmic slope `y`, and the
/// exponential companion `phi` (whose flow is `phi' = y phi`).
#[derive(Debug, Clone, Copy)]
pub struct Beta2State {
    pub q: f64,
    pub y: f64,
    pub phi: f64,
}

/// Scalar data of the coupling-4 hard-edge pair at one time: `q`, its
/// derivative, and the two exponential companions with `S+ S- = 1 - q^2`.
#[derive(Debug, Clone, Copy)]
pub struct Beta4State {
    pub q: f64,
    pub qp: f64,
    pub s_plus: f64,
    pub s_minus: f64,
}

fn guard_t(t: f64) -> Result<f64> {
    Error::guard_positive("t", t, SINGULAR_BAND)
}

/// One of the two coupling-2 hard-edge pair representations, distinguished by
/// the family of its coupled `(q, y)` flow. Constructed by [`assemble_thm1a`]
/// and [`assemble_thm1b`].
pub struct Beta2HardAssembly {
    params: PIIIParams,
    data: Box<dyn Fn(f64) -> Result<Beta2State> + Sync>,
    h_shift: f64,
}

/// The first coupling-2 hard-edge pair (label `thm1a`): `L` carries the full
/// double pole and the auxiliary `h` is `(q^2-1)/(t^2 y) - (a-1)`.
pub fn assemble_thm1a(
    a: f64,
    data: impl Fn(f64) -> Result<Beta2State> + Sync + 'static,
) -> Result<Beta2HardAssembly> {
    Ok(Beta2HardAssembly {
        params: PIIIParams::new(a, 1.0, PIIIVariant::theorem(Family::A))?,
        data: Box::new(data),
        h_shift: 0.0,
    })
}

/// The second coupling-2 hard-edge pair (label `thm1b`): the double pole sits
/// only in the lower-right entry and `h` is `(q^2-1)/(t^2 y) + a`.
pub fn assemble_thm1b(
    a: f64,
    data: impl Fn(f64) -> Result<Beta2State> + Sync + 'static,
) -> Result<Beta2HardAssembly> {
    Ok(Beta2HardAssembly {
        params: PIIIParams::new(a, 1.0, PIIIVariant::theorem(Family::B))?,
        data: Box::new(data),
        h_shift: 0.0,
    })
}

impl Beta2HardAssembly {
    /// Shift the auxiliary `h` by a constant — a deliberate corruption used
    /// to confirm the residual engines detect inconsistent pairs.
    pub fn with_h_shift(mut self, delta: f64) -> Self {
        self.h_shift = delta;
        self
    }

    fn fetch(&self, t: f64) -> Result<(Beta2State, f64, f64)> {
        guard_t(t)?;
        let d = (self.data)(t)?;
        Error::guard_nonzero("y", d.y, SINGULAR_BAND)?;
        Error::guard_nonzero("phi", d.phi, SINGULAR_BAND)?;
        let (qp, yp) = coupled_rhs(&self.params, &CoupledState { t, q: d.q, y: d.y })?;
        Ok((d, qp, yp))
    }
}

impl LaxAssembly for Beta2HardAssembly {
    fn poles_with_derivative(&self, t: f64) -> Result<(PolePowers, PolePowers)> {
        let (d, qp, yp) = self.fetch(t)?;
        let a = self.params.a;
        let tj = Jet::var(t);
        let q = Jet::new(d.q, qp);
        let y = Jet::new(d.y, yp);
        let phi = Jet::new(d.phi, d.y * d.phi);
        let z = Jet::con(0.0);
        let one = Jet::con(1.0);
        let q2 = q * q;
        let t2 = tj * tj;
        let t3 = t2 * tj;
        let h = (q2 - 1.0) / (t2 * y)
            + match self.params.variant.family {
                Family::A => -(a - 1.0),
                Family::B => a,
            }
            + self.h_shift;
        let scalar = q2 / t2 - q2 * h / (t3 * y);
        let mut jp = JetPoles::zero();
        match self.params.variant.family {
            Family::A => {
                jp.l[0] = JetMat::new(
                    q2 / tj,
                    tj * y * phi,
                    -(q2 * (q2 - 1.0)) / (t3 * y * phi),
                    (one - q2) / tj,
                );
                jp.l[1] = JetMat::new(z, phi, q2 * h / (t2 * y * phi), Jet::con(1.0 - a));
                jp.l[2] = JetMat::new(z, z, z, one);
                jp.b[1] = JetMat::new(
                    q2 / t2,
                    y * phi,
                    -(q2 * (q2 - 1.0)) / (t2 * t2 * y * phi),
                    (one - q2) / t2,
                );
                jp.b[2] = JetMat::scalar(scalar);
            }
            Family::B => {
                jp.l[0] = JetMat::new(z, z, z, one / tj);
                jp.l[1] = JetMat::new(z, phi, q2 * h / (t2 * y * phi), Jet::con(-a));
                jp.l[2] = JetMat::new(
                    q2,
                    -(t2 * y * phi),
                    q2 * (q2 - 1.0) / (t2 * y * phi),
                    one - q2,
                );
                jp.b[1] = JetMat::new(z, z, z, one / t2);
                jp.b[2] = JetMat::new(
                    scalar,
                    phi / tj,
                    q2 * h / (t3 * y * phi),
                    scalar - Jet::con(a) / tj,
                );
            }
        }
        Ok(jp.split())
    }

    fn l_direct(&self, t: f64, x: f64) -> Result<Matrix2> {
        let (d, _, _) = self.fetch(t)?;
        Error::guard_nonzero("x", x, SINGULAR_BAND)?;
        let a = self.params.a;
        let h = h_aux(&self.params, t, d.q, d.y)? + self.h_shift;
        let (q2, y, phi) = (d.q * d.q, d.y, d.phi);
        let x2 = x * x;
        Ok(match self.params.variant.family {
            Family::A => Matrix2::new(
                q2 / (t * x2),
                phi / x + t * y * phi / x2,
                q2 * h / (t * t * y * phi) / x - q2 * (q2 - 1.0) / (t.powi(3) * y * phi) / x2,
                (1.0 - q2) / (t * x2) + (1.0 - a) / x + 1.0,
            ),
            Family::B => Matrix2::new(
                q2,
                phi / x - t * t * y * phi,
                q2 * h / (t * t * y * phi) / x + q2 * (q2 - 1.0) / (t * t * y * phi),
                1.0 / (t * x2) - a / x + 1.0 - q2,
            ),
        })
    }

    fn b_direct(&self, t: f64, x: f64) -> Result<Matrix2> {
        let (d, _, _) = self.fetch(t)?;
        Error::guard_nonzero("x", x, SINGULAR_BAND)?;
        let a = self.params.a;
        let h = h_aux(&self.params, t, d.q, d.y)? + self.h_shift;
        let (q2, y, phi) = (d.q * d.q, d.y, d.phi);
        let s = q2 / (t * t) - q2 * h / (t.powi(3) * y);
        Ok(match self.params.variant.family {
            Family::A => {
                Matrix2::scalar(s)
                    + Matrix2::new(
                        q2 / (t * t),
                        y * phi,
                        -q2 * (q2 - 1.0) / (t.powi(4) * y * phi),
                        (1.0 - q2) / (t * t),
                    ) * (1.0 / x)
            }
            Family::B => {
                Matrix2::scalar(s)
                    + Matrix2::new(
                        0.0,
                        phi / t,
                        q2 * h / (t.powi(3) * y * phi),
                        1.0 / (t * t * x) - a / t,
                    )
            }
        })
    }

    fn compat_spec(&self) -> CompatSpec {
        CompatSpec {
            mode: CompatMode::Hard,
            kappa: 1.0,
            a: self.params.a,
        }
    }
}

/// The coupling-4 hard-edge pair (label `thm2`), built over `(q, q', S+, S-)`
/// data. Constructed by [`assemble_thm2`].
///
/// The constant-in-x traceless part of `B` is the `1/x`-coefficient of `L`
/// (traceless part) divided by `2t`; this is the form the time-derivative
/// consistency of the pair forces.
pub struct Beta4HardAssembly {
    a: f64,
    data: Box<dyn Fn(f64) -> Result<Beta4State> + Sync>,
}

/// Assemble the coupling-4 hard-edge pair.
pub fn assemble_thm2(
    a: f64,
    data: impl Fn(f64) -> Result<Beta4State> + Sync + 'static,
) -> Beta4HardAssembly {
    Beta4HardAssembly {
        a,
        data: Box::new(data),
    }
}

impl Beta4HardAssembly {
    fn fetch(&self, t: f64) -> Result<Beta4State> {
        guard_t(t)?;
        let d = (self.data)(t)?;
        Error::guard_nonzero("q^2 - 1", d.q * d.q - 1.0, SINGULAR_BAND)?;
        Ok(d)
    }
}

impl LaxAssembly for Beta4HardAssembly {
    fn poles_with_derivative(&self, t: f64) -> Result<(PolePowers, PolePowers)> {
        let d = self.fetch(t)?;
        let a = self.a;
        let qpp = tw_rhs(a, t, d.q, d.qp)?;
        let (spd, smd) = spm_rhs(
            a,
            t,
            d.q,
            d.qp,
            &SPMState {
                t,
                s_plus: d.s_plus,
                s_minus: d.s_minus,
            },
        )?;
        // h0 as a jet: differentiate the closed formula through the flow.
        let tj = Jet::var(t);
        let q = Jet::new(d.q, d.qp);
        let qp = Jet::new(d.qp, qpp);
        let sp = Jet::new(d.s_plus, spd);
        let sm = Jet::new(d.s_minus, smd);
        let one = Jet::con(1.0);
        let q2m1 = q * q - 1.0;
        let tqp2 = tj * qp * 2.0;
        let h0 = (-((tqp2 * tqp2 - a * a) / (q2m1 * 4.0)) + q * q / tj + Jet::con(a * (a - 2.0) / 4.0))
            / (tj * 2.0);
        let c_plus = (tqp2 + a) / (q2m1 * 2.0);
        let c_minus = -(tqp2 - a) / (q2m1 * 2.0);
        let t2 = tj * tj;
        let mut jp = JetPoles::zero();
        jp.l[0] = JetMat::new(
            (one + q) / (tj * 2.0),
            sp / (tj * 2.0),
            sm / (tj * 2.0),
            (one - q) / (tj * 2.0),
        );
        jp.l[1] = JetMat::new(Jet::con(-a / 2.0), c_plus * sp, c_minus * sm, Jet::con(-a / 2.0));
        jp.l[2] = JetMat::new((one - q) / 2.0, sp / 2.0, sm / 2.0, (one + q) / 2.0);
        jp.b[1] = JetMat::new(
            (one + q) / (t2 * 2.0),
            sp / (t2 * 2.0),
            sm / (t2 * 2.0),
            (one - q) / (t2 * 2.0),
        );
        jp.b[2] = JetMat::new(h0, c_plus * sp / (tj * 2.0), c_minus * sm / (tj * 2.0), h0);
        Ok(jp.split())
    }

    fn l_direct(&self, t: f64, x: f64) -> Result<Matrix2> {
        let d = self.fetch(t)?;
        Error::guard_nonzero("x", x, SINGULAR_BAND)?;
        let a = self.a;
        let (q, qp, sp, sm) = (d.q, d.qp, d.s_plus, d.s_minus);
        let cp = (2.0 * t * qp + a) / (2.0 * (q * q - 1.0));
        let cm = -(2.0 * t * qp - a) / (2.0 * (q * q - 1.0));
        let x2 = x * x;
        Ok(Matrix2::new(
            (1.0 + q) / (2.0 * t * x2) - a / (2.0 * x) + (1.0 - q) / 2.0,
            sp / (2.0 * t * x2) + cp * sp / x + sp / 2.0,
            sm / (2.0 * t * x2) + cm * sm / x + sm / 2.0,
            (1.0 - q) / (2.0 * t * x2) - a / (2.0 * x) + (1.0 + q) / 2.0,
        ))
    }

    fn b_direct(&self, t: f64, x: f64) -> Result<Matrix2> {
        let d = self.fetch(t)?;
        Error::guard_nonzero("x", x, SINGULAR_BAND)?;
        let a = self.a;
        let (q, qp, sp, sm) = (d.q, d.qp, d.s_plus, d.s_minus);
        let h0 = h0_eval(a, t, q, qp)?;
        let cp = (2.0 * t * qp + a) / (2.0 * (q * q - 1.0));
        let cm = -(2.0 * t * qp - a) / (2.0 * (q * q - 1.0));
        let t2 = t * t;
        Ok(Matrix2::scalar(h0)
            + Matrix2::new(
                (1.0 + q) / (2.0 * t2 * x),
                sp / (2.0 * t2 * x) + cp * sp / (2.0 * t),
                sm / (2.0 * t2 * x) + cm * sm / (2.0 * t),
                (1.0 - q) / (2.0 * t2 * x),
            ))
    }

    fn compat_spec(&self) -> CompatSpec {
        CompatSpec {
            mode: CompatMode::Hard,
            kappa: 2.0,
            a: self.a,
        }
    }
}

/// The explicit pair family (label `thm3`): valid as a flat pair for *any*
/// smooth `(r, phi)`, with the distribution carried only when the coupling
/// relation `kappa = 2 - a` is imposed on the evolution operator.
/// Constructed by [`assemble_thm3`] (value+derivative providers) or
/// [`assemble_thm3_fd`] (value-only providers, derivatives by central
/// differences).
pub struct ExplicitPairAssembly {
    kappa: f64,
    r: Box<dyn Fn(f64) -> Result<(f64, f64)> + Sync>,
    phi: Box<dyn Fn(f64) -> Result<(f64, f64)> + Sync>,
    fd_step: f64,
}

/// Assemble the explicit pair from `(value, derivative)` providers for `r`
/// and `phi`.
pub fn assemble_thm3(
    kappa: f64,
    r: impl Fn(f64) -> Result<(f64, f64)> + Sync + 'static,
    phi: impl Fn(f64) -> Result<(f64, f64)> + Sync + 'static,
) -> Result<ExplicitPairAssembly> {
    if !(kappa > 0.0) {
        return Err(Error::DomainError(format!(
            "kappa must be positive, got {kappa:e}"
        )));
    }
    Ok(ExplicitPairAssembly {
        kappa,
        r: Box::new(r),
        phi: Box::new(phi),
        fd_step: Tolerances::default().fd_step,
    })
}

/// Assemble the explicit pair from value-only providers; first derivatives
/// are formed by central differences with the default step.
pub fn assemble_thm3_fd(
    kappa: f64,
    r: impl Fn(f64) -> Result<f64> + Sync + Copy + 'static,
    phi: impl Fn(f64) -> Result<f64> + Sync + Copy + 'static,
) -> Result<ExplicitPairAssembly> {
    let h = Tolerances::default().fd_step;
    // Provider failure inside the stencil surfaces as a NaN, which
    // fd_partial reports as a non-finite-value error.
    assemble_thm3(
        kappa,
        move |t| {
            Ok((
                r(t)?,
                fd_partial(|s| r(s).unwrap_or(f64::NAN), t, h)?,
            ))
        },
        move |t| {
            Ok((
                phi(t)?,
                fd_partial(|s| phi(s).unwrap_or(f64::NAN), t, h)?,
            ))
        },
    )
}

impl ExplicitPairAssembly {
    fn fetch(&self, t: f64) -> Result<((f64, f64), (f64, f64))> {
        guard_t(t)?;
        let rv = (self.r)(t)?;
        let pv = (self.phi)(t)?;
        Error::guard_nonzero("phi", pv.0, SINGULAR_BAND)?;
        Ok((rv, pv))
    }
}

impl LaxAssembly for ExplicitPairAssembly {
    fn poles_with_derivative(&self, t: f64) -> Result<(PolePowers, PolePowers)> {
        let ((r, rp), (phi, php)) = self.fetch(t)?;
        // Second derivatives (needed only for the t-derivatives of the B
        // coefficients that contain r' and phi') fall back to central
        // differences of the providers' derivative components.
        let h = self.fd_step;
        let rf = &self.r;
        let pf = &self.phi;
        let rpp = fd_partial(|s| rf(s).map(|v| v.1).unwrap_or(f64::NAN), t, h)?;
        let phpp = fd_partial(|s| pf(s).map(|v| v.1).unwrap_or(f64::NAN), t, h)?;
        let k = self.kappa;
        let tj = Jet::var(t);
        let rj = Jet::new(r, rp);
        let rpj = Jet::new(rp, rpp);
        let phij = Jet::new(phi, php);
        let phipj = Jet::new(php, phpp);
        let one = Jet::con(1.0);
        let t2 = tj * tj;
        let mut jp = JetPoles::zero();
        jp.l[0] = JetMat::new(
            (one + rj) / (tj * 2.0),
            phij / tj,
            -(rj * rj - 1.0) / (tj * phij * 4.0),
            (one - rj) / (tj * 2.0),
        );
        jp.b[1] = JetMat::new(
            (one + rj) / (t2 * 2.0),
            phij / t2,
            -(rj * rj - 1.0) / (t2 * phij * 4.0),
            (one - rj) / (t2 * 2.0),
        );
        jp.b[2] = JetMat::new(
            (one + rj) / (t2 * 2.0 * k),
            phij / (t2 * k),
            -(rj * rj - 1.0) / (t2 * phij * 4.0 * k) - rpj / (phij * 2.0),
            (one - rj) / (t2 * 2.0 * k) - phipj / phij,
        );
        Ok(jp.split())
    }

    fn l_direct(&self, t: f64, x: f64) -> Result<Matrix2> {
        let ((r, _), (phi, _)) = self.fetch(t)?;
        Error::guard_nonzero("x", x, SINGULAR_BAND)?;
        let x2 = x * x;
        Ok(Matrix2::new(
            (1.0 + r) / (2.0 * t * x2),
            phi / (t * x2),
            -(r * r - 1.0) / (4.0 * t * phi * x2),
            (1.0 - r) / (2.0 * t * x2),
        ))
    }

    fn b_direct(&self, t: f64, x: f64) -> Result<Matrix2> {
        let ((r, rp), (phi, php)) = self.fetch(t)?;
        Error::guard_nonzero("x", x, SINGULAR_BAND)?;
        let k = self.kappa;
        let t2 = t * t;
        Ok(Matrix2::new(
            (1.0 + r) / (2.0 * t2 * x) + (1.0 + r) / (2.0 * k * t2),
            phi / (t2 * x) + phi / (k * t2),
            -(r * r - 1.0) / (4.0 * t2 * phi * x) - (r * r - 1.0) / (4.0 * k * t2 * phi)
                - rp / (2.0 * phi),
            (1.0 - r) / (2.0 * t2 * x) + (1.0 - r) / (2.0 * k * t2) - php / phi,
        ))
    }

    fn compat_spec(&self) -> CompatSpec {
        CompatSpec {
            mode: CompatMode::Hard,
            kappa: self.kappa,
            a: 2.0 - self.kappa,
        }
    }
}

/// The first scaling-limit pair (label `thm4`), built over a tabulated
/// separatrix solution of `q'' = tq + 2q^3` and its companion
/// `u = (q')^2 - t q^2 - q^4`. Constructed by [`assemble_soft_thm4`].
pub struct SoftPIIAssembly {
    hm: HMSolution,
}

/// Assemble the first scaling-limit pair.
pub fn assemble_soft_thm4(hm: HMSolution) -> SoftPIIAssembly {
    SoftPIIAssembly { hm }
}

impl SoftPIIAssembly {
    fn jets(&self, t: f64) -> Result<(Jet, Jet, Jet)> {
        let q = self.hm.sample_q(t)?;
        let qp = self.hm.sample_qp(t)?;
        let u = self.hm.sample_u(t)?;
        Ok((
            Jet::new(q, qp),
            Jet::new(qp, pii_rhs(t, q)),
            Jet::new(u, -q * q),
        ))
    }
}

impl LaxAssembly for SoftPIIAssembly {
    fn poles_with_derivative(&self, t: f64) -> Result<(PolePowers, PolePowers)> {
        let (q, qp, u) = self.jets(t)?;
        let tj = Jet::var(t);
        let z = Jet::con(0.0);
        let one = Jet::con(1.0);
        let mut jp = JetPoles::zero();
        jp.l[2] = JetMat::new(q * q, -qp, qp, -tj - q * q);
        jp.l[3] = JetMat::new(z, -q, -q, z);
        jp.l[4] = JetMat::new(z, z, z, one);
        jp.b[2] = JetMat::new(u, q, q, u);
        jp.b[3] = JetMat::new(z, z, z, -one);
        Ok(jp.split())
    }

    fn l_direct(&self, t: f64, x: f64) -> Result<Matrix2> {
        let q = self.hm.sample_q(t)?;
        let qp = self.hm.sample_qp(t)?;
        Ok(Matrix2::new(
            q * q,
            -(q * x + qp),
            -q * x + qp,
            x * x - t - q * q,
        ))
    }

    fn b_direct(&self, t: f64, x: f64) -> Result<Matrix2> {
        let q = self.hm.sample_q(t)?;
        let u = self.hm.sample_u(t)?;
        Ok(Matrix2::new(u, q, q, u - x))
    }

    fn compat_spec(&self) -> CompatSpec {
        CompatSpec {
            mode: CompatMode::Soft,
            kappa: 1.0,
            a: 0.0,
        }
    }
}

/// The second scaling-limit pair (label `thm5`), built over the same
/// separatrix solution plus exponential companions with `S+' = -q S+` and
/// `S+ S- = 1`. The displayed matrices carry overall scale factors in the
/// limit; they are exposed here unscaled, with the exponents recorded in
/// [`SoftBeta4Assembly::l_scale_exponent`] and
/// [`SoftBeta4Assembly::b_scale_exponent`]. Constructed by
/// [`assemble_soft_thm5`].
pub struct SoftBeta4Assembly {
    hm: HMSolution,
    sp: ScalarTable,
    sm: ScalarTable,
    /// Exponent of the overall scale carried by `L` in the limit.
    pub l_scale_exponent: f64,
    /// Exponent of the overall scale carried by `B` in the limit.
    pub b_scale_exponent: f64,
}

/// Assemble the second scaling-limit pair. The product `S+ S- = 1` is
/// validated on the common tabulated range.
pub fn assemble_soft_thm5(
    hm: HMSolution,
    sp: ScalarTable,
    sm: ScalarTable,
) -> Result<SoftBeta4Assembly> {
    let (lo_p, hi_p) = sp.range();
    let (lo_m, hi_m) = sm.range();
    let lo = lo_p.max(lo_m);
    let hi = hi_p.min(hi_m);
    if !(lo < hi) {
        return Err(Error::DomainError(
            "S+ and S- tables do not overlap".to_string(),
        ));
    }
    let samples = 101;
    for k in 0..samples {
        let t = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
        let (p, _) = sp.sample(t)?;
        let (m, _) = sm.sample(t)?;
        if (p * m - 1.0).abs() > 1e-10 {
            return Err(Error::ConstraintViolated(format!(
                "S+ S- - 1 = {:e} at t = {t}",
                p * m - 1.0
            )));
        }
    }
    Ok(SoftBeta4Assembly {
        hm,
        sp,
        sm,
        l_scale_exponent: -2.0 / 3.0,
        b_scale_exponent: 8.0 / 3.0,
    })
}

impl SoftBeta4Assembly {
    fn jets(&self, t: f64) -> Result<(Jet, Jet, Jet, Jet, Jet)> {
        let q = self.hm.sample_q(t)?;
        let qp = self.hm.sample_qp(t)?;
        let u = self.hm.sample_u(t)?;
        let (spv, spd) = self.sp.sample(t)?;
        let (smv, smd) = self.sm.sample(t)?;
        Ok((
            Jet::new(q, qp),
            Jet::new(qp, pii_rhs(t, q)),
            Jet::new(u, -q * q),
            Jet::new(spv, spd),
            Jet::new(smv, smd),
        ))
    }
}

impl LaxAssembly for SoftBeta4Assembly {
    fn poles_with_derivative(&self, t: f64) -> Result<(PolePowers, PolePowers)> {
        let (q, qp, u, sp, sm) = self.jets(t)?;
        let tj = Jet::var(t);
        let z = Jet::con(0.0);
        let half = Jet::con(0.5);
        let mut jp = JetPoles::zero();
        let w0 = -tj / 2.0;
        jp.l[2] = JetMat::new(w0, (w0 - qp - q * q) * sp, (w0 + qp - q * q) * sm, w0);
        jp.l[3] = JetMat::new(-q, z, z, q);
        jp.l[4] = JetMat::new(half, sp / 2.0, sm / 2.0, half);
        jp.b[2] = JetMat::new((u + q) / 2.0, z, z, (u - q) / 2.0);
        jp.b[3] = JetMat::new(-half, -(sp / 2.0), -(sm / 2.0), -half);
        Ok(jp.split())
    }

    fn l_direct(&self, t: f64, x: f64) -> Result<Matrix2> {
        let q = self.hm.sample_q(t)?;
        let qp = self.hm.sample_qp(t)?;
        let (sp, _) = self.sp.sample(t)?;
        let (sm, _) = self.sm.sample(t)?;
        let w = (x * x - t) / 2.0;
        Ok(Matrix2::new(
            w - q * x,
            (w - qp - q * q) * sp,
            (w + qp - q * q) * sm,
            w + q * x,
        ))
    }

    fn b_direct(&self, t: f64, x: f64) -> Result<Matrix2> {
        let q = self.hm.sample_q(t)?;
        let u = self.hm.sample_u(t)?;
        let (sp, _) = self.sp.sample(t)?;
        let (sm, _) = self.sm.sample(t)?;
        Ok(Matrix2::new(
            -(x - u - q) / 2.0,
            -sp * x / 2.0,
            -x * sm / 2.0,
            -(x - u + q) / 2.0,
        ))
    }

    fn compat_spec(&self) -> CompatSpec {
        CompatSpec {
            mode: CompatMode::Soft,
            kappa: 2.0,
            a: 0.0,
        }
    }
}

/// Build the exponential-companion tables for the second scaling-limit pair
/// from a tabulated separatrix solution: `ln S+` is integrated from
/// `S+(0) = 1` with `S+' = -q S+`, and `S- = 1/S+` exactly.
pub fn soft_spm_tables(hm: &HMSolution) -> Result<(ScalarTable, ScalarTable)> {
    let grid = &hm.grid;
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| -> Result<()> {
        let _ = y;
        dy[0] = -hm.sample_q(s)?;
        Ok(())
    };
    let tol = Tolerances {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        ..Tolerances::default()
    };
    let below: Vec<f64> = grid.iter().copied().filter(|&t| t < 0.0).rev().collect();
    let above: Vec<f64> = grid.iter().copied().filter(|&t| t >= 0.0).collect();
    let left = integrate_checkpoints(rhs, 0.0, &[0.0], &below, tol)?;
    let right = integrate_checkpoints(rhs, 0.0, &[0.0], &above, tol)?;
    let mut nodes = Vec::with_capacity(grid.len());
    let mut ln_sp = Vec::with_capacity(grid.len());
    for (t, s) in left.into_iter().rev().chain(right) {
        nodes.push(t);
        ln_sp.push(s[0]);
    }
    let mut sp_v = Vec::with_capacity(nodes.len());
    let mut sp_d = Vec::with_capacity(nodes.len());
    let mut sm_v = Vec::with_capacity(nodes.len());
    let mut sm_d = Vec::with_capacity(nodes.len());
    for (t, l) in nodes.iter().zip(&ln_sp) {
        let q = hm.sample_q(*t)?;
        let sp = l.exp();
        sp_v.push(sp);
        sp_d.push(-q * sp);
        sm_v.push(1.0 / sp);
        sm_d.push(q / sp);
    }
    Ok((
        ScalarTable {
            grid: nodes.clone(),
            v: sp_v,
            vp: sp_d,
        },
        ScalarTable {
            grid: nodes,
            v: sm_v,
            vp: sm_d,
        },
    ))
}

/// Integrate the coupling-2 flow `(q, y, phi)` from seed values at `t0` over
/// `[t_lo, t_hi]` (with `t_lo <= t0 <= t_hi`) and return a provider that
/// samples the trajectory. Integration runs at tightened tolerance so that
/// interpolation error stays below the residual thresholds the provider is
/// used against.
pub fn beta2_flow_provider(
    params: PIIIParams,
    t0: f64,
    q0: f64,
    y0: f64,
    phi0: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<impl Fn(f64) -> Result<Beta2State> + Sync> {
    if !(t_lo <= t0 && t0 <= t_hi) {
        return Err(Error::DomainError(format!(
            "seed time {t0} outside window [{t_lo}, {t_hi}]"
        )));
    }
    let rhs = move |t: f64, s: &[f64], ds: &mut [f64]| -> Result<()> {
        let (qp, yp) = coupled_rhs(&params, &CoupledState { t, q: s[0], y: s[1] })?;
        ds[0] = qp;
        ds[1] = yp;
        ds[2] = s[1] * s[2];
        Ok(())
    };
    let tol = Tolerances::default().tightened(100.0);
    let seed = [q0, y0, phi0];
    let down = if t_lo < t0 {
        Some(integrate_ivp(rhs, t0, &seed, t_lo, tol)?)
    } else {
        None
    };
    let up = if t_hi > t0 {
        Some(integrate_ivp(rhs, t0, &seed, t_hi, tol)?)
    } else {
        None
    };
    Ok(move |t: f64| -> Result<Beta2State> {
        let traj = if t < t0 {
            down.as_ref()
        } else {
            up.as_ref().or(down.as_ref())
        }
        .ok_or(Error::RangeError {
            s: t,
            lo: t_lo,
            hi: t_hi,
        })?;
        let s = traj.sample(t)?;
        Ok(Beta2State {
            q: s[0],
            y: s[1],
            phi: s[2],
        })
    })
}

/// Integrate the coupling-4 flow `(q, q', S+, S-)` from seed values at `t0`
/// over `[t_lo, t_hi]`; `S-` is seeded as `(1 - q0^2)/S+(t0)` so the product
/// constraint holds exactly at the seed. Returns a trajectory-backed
/// provider.
pub fn beta4_flow_provider(
    a: f64,
    t0: f64,
    q0: f64,
    qp0: f64,
    sp0: f64,
    t_lo: f64,
    t_hi: f64,
) -> Result<impl Fn(f64) -> Result<Beta4State> + Sync> {
    if !(t_lo <= t0 && t0 <= t_hi) {
        return Err(Error::DomainError(format!(
            "seed time {t0} outside window [{t_lo}, {t_hi}]"
        )));
    }
    Error::guard_nonzero("S+", sp0, SINGULAR_BAND)?;
    let rhs = move |t: f64, s: &[f64], ds: &mut [f64]| -> Result<()> {
        let qpp = tw_rhs(a, t, s[0], s[1])?;
        let (spd, smd) = spm_rhs(
            a,
            t,
            s[0],
            s[1],
            &SPMState {
                t,
                s_plus: s[2],
                s_minus: s[3],
            },
        )?;
        ds[0] = s[1];
        ds[1] = qpp;
        ds[2] = spd;
        ds[3] = smd;
        Ok(())
    };
    let tol = Tolerances::default().tightened(100.0);
    let seed = [q0, qp0, sp0, (1.0 - q0 * q0) / sp0];
    let down = if t_lo < t0 {
        Some(integrate_ivp(rhs, t0, &seed, t_lo, tol)?)
    } else {
        None
    };
    let up = if t_hi > t0 {
        Some(integrate_ivp(rhs, t0, &seed, t_hi, tol)?)
    } else {
        None
    };
    Ok(move |t: f64| -> Result<Beta4State> {
        let traj = if t < t0 {
            down.as_ref()
        } else {
            up.as_ref().or(down.as_ref())
        }
        .ok_or(Error::RangeError {
            s: t,
            lo: t_lo,
            hi: t_hi,
        })?;
        let s = traj.sample(t)?;
        Ok(Beta4State {
            q: s[0],
            qp: s[1],
            s_plus: s[2],
            s_minus: s[3],
        })
    })
}
