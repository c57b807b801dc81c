//! The adiabatically eliminated two-state model: effective coupling
//! lambda(t), its quadrature xi(t), the closed-form asymptotic coupling
//! angle theta(v, ell), and the two-qubit evolution matrix U(theta).

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::couplings::{g_of_t, omega_of_t, Atom};
use crate::error::{Error, Result};
use crate::params::{derive_scales, Kinematics, PhysicalParams};

/// sqrt(pi/32), the prefactor of the closed-form coupling angle.
pub const THETA_PREFACTOR: f64 = 0.313_328_534_328_875_03;

/// Where an angle value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleProvenance {
    ClosedForm,
    Quadrature,
    FullModel,
}

/// An asymptotic coupling angle tagged with its computation route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveAngle {
    pub theta: f64,
    pub provenance: AngleProvenance,
}

/// Effective coupling lambda(t) = Omega1 Omega2 g1 g2 / (4 delta Delta^2).
pub fn lambda_of_t(p: &PhysicalParams, k: &Kinematics, t: f64) -> f64 {
    let g1 = g_of_t(Atom::First, p, k, t);
    let g2 = g_of_t(Atom::Second, p, k, t);
    if g1 == 0.0 || g2 == 0.0 {
        return 0.0;
    }
    let om1 = omega_of_t(Atom::First, p, k, t).unwrap_or(0.0);
    let om2 = omega_of_t(Atom::Second, p, k, t).unwrap_or(0.0);
    om1 * om2 * g1 * g2 / (4.0 * p.delta * p.laser_detuning.powi(2))
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence {
            estimate: left + right,
            error: delta.abs(),
        });
    }
    let l = adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Adaptive quadrature of a smooth compactly supported integrand over
/// [a, b]. The interval is pre-split so narrow bumps are not missed.
fn quadrature(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let panels = 32;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let pa = a + i as f64 * h;
        let pb = pa + h;
        let pm = 0.5 * (pa + pb);
        let (fa, fm, fb) = (f(pa), f(pm), f(pb));
        let whole = simpson(pa, pb, fa, fm, fb);
        total += adaptive_simpson(&f, pa, pb, fa, fm, fb, whole, tol / panels as f64, 48)?;
    }
    Ok(total)
}

/// Internal absolute quadrature tolerance; well below the documented 1e-10
/// bound so that relative accuracy holds even for small angles.
const XI_QUAD_TOL: f64 = 1e-13;

/// xi(t_end) = integral of lambda from the window start to `t_end`.
/// `t_end = f64::INFINITY` integrates over the whole transit.
pub fn xi_quadrature(p: &PhysicalParams, k: &Kinematics, t_end: f64) -> Result<f64> {
    p.validate()?;
    k.validate()?;
    // lambda is supported where both atoms are inside the coupling window
    let support = k.window_sigma * p.waist;
    let t_lo = (-support - k.z2_initial(p)) / k.velocity;
    let t_hi = (support - k.z1_initial(p)) / k.velocity;
    let a = t_lo.max(0.0);
    let b = t_hi.min(t_end.min(k.transit_end(p)));
    quadrature(|t| lambda_of_t(p, k, t), a, b, XI_QUAD_TOL)
}

/// theta(v, ell) = sqrt(pi/32) Omega^2 g0^2 w / (delta Delta^2 v)
/// exp(-ell^2 / 2 w^2), valid for the constant laser profile.
pub fn theta_closed_form(p: &PhysicalParams, k: &Kinematics) -> Result<f64> {
    p.validate()?;
    if !p.constant_laser() {
        return Err(Error::ConstantOmegaRequired);
    }
    if k.velocity == 0.0 {
        return Err(Error::InvalidParameter {
            name: "v",
            reason: "must be nonzero for the asymptotic angle".to_string(),
        });
    }
    let scales = derive_scales(p)?;
    Ok(theta_reduced(
        k.velocity / scales.velocity_unit,
        k.separation / p.waist,
    ))
}

/// The closed-form angle in reduced coordinates:
/// theta = sqrt(pi/32) / (v/K) * exp(-(ell/w)^2 / 2).
pub fn theta_reduced(v_over_k: f64, ell_over_w: f64) -> f64 {
    THETA_PREFACTOR / v_over_k * (-0.5 * ell_over_w * ell_over_w).exp()
}

/// A 4x4 operator on the hyperfine basis (|0,0>, |0,1>, |1,0>, |1,1>) plus
/// the total squared amplitude that left the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitOperator {
    pub matrix: Array2<C64>,
    pub leakage_norm: f64,
}

impl TwoQubitOperator {
    pub fn identity() -> Self {
        TwoQubitOperator {
            matrix: Array2::eye(4),
            leakage_norm: 0.0,
        }
    }

    /// Frobenius distance to another operator, on the 4x4 block only.
    pub fn frobenius_distance(&self, other: &TwoQubitOperator) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Max deviation of U^dagger U from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.matrix.t().mapv(|c| c.conj()).dot(&self.matrix);
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((prod[[i, j]] - C64::new(expect, 0.0)).norm());
            }
        }
        worst
    }
}

/// The transit evolution U(theta): identity on |0,0> and |1,1>, central
/// block [[cos, -i sin], [-i sin, cos]] on |0,1>, |1,0>.
pub fn evolution_matrix(theta: f64) -> TwoQubitOperator {
    let mut m = Array2::eye(4);
    let c = C64::new(theta.cos(), 0.0);
    let s = C64::new(0.0, -theta.sin());
    m[[1, 1]] = c;
    m[[1, 2]] = s;
    m[[2, 1]] = s;
    m[[2, 2]] = c;
    TwoQubitOperator {
        matrix: m,
        leakage_norm: 0.0,
    }
}
