//! Integration of the five coupled amplitude equations of the restricted
//! composite wave function over the cavity transit.
//!
//! The amplitudes c1..c5 belong to |a,1;0>, |a,e;0>, |a,a;1>, |e,a;0>, and
//! |1,a;0> in that order (the bar over atom-2 labels is dropped).

use num_complex::Complex64 as C64;

use crate::couplings::{g_of_t, omega_of_t, Atom};
use crate::error::{Error, Result};
use crate::ode::{integrate_adaptive_dop853, SolverStats};
pub use crate::ode::Tolerances;
use crate::params::{Kinematics, PhysicalParams};

/// Population outside the hyperfine pair (|c2|^2 + |c3|^2 + |c4|^2) above
/// which an angle extraction is reported as non-adiabatic.
pub const DEFAULT_LEAKAGE_BOUND: f64 = 0.1;

/// The restricted five-amplitude state at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullState {
    pub amps: [C64; 5],
    pub t: f64,
}

impl FullState {
    /// Initial state |a,1;0> (amplitude on c1).
    pub fn initial_a1() -> Self {
        let mut amps = [C64::new(0.0, 0.0); 5];
        amps[0] = C64::new(1.0, 0.0);
        FullState { amps, t: 0.0 }
    }

    /// Initial state |1,a;0> (amplitude on c5), the time-reversed entry.
    pub fn initial_1a() -> Self {
        let mut amps = [C64::new(0.0, 0.0); 5];
        amps[4] = C64::new(1.0, 0.0);
        FullState { amps, t: 0.0 }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Population of the intermediate states c2, c3, c4.
    pub fn intermediate_population(&self) -> f64 {
        self.amps[1].norm_sqr() + self.amps[2].norm_sqr() + self.amps[3].norm_sqr()
    }
}

/// Right-hand side of the closed amplitude equations:
///
/// i c1' = Omega2/2 c2
/// i c2' = Delta c2 + g2 c3 + Omega2/2 c1
/// i c3' = -delta c3 + g1 c4 + g2 c2
/// i c4' = Delta c4 + g1 c3 + Omega1/2 c5
/// i c5' = Omega1/2 c4
pub fn rhs(state: &FullState, p: &PhysicalParams, k: &Kinematics) -> [C64; 5] {
    rhs_at(state.t, &state.amps, p, k)
}

fn rhs_at(t: f64, c: &[C64; 5], p: &PhysicalParams, k: &Kinematics) -> [C64; 5] {
    let g1 = g_of_t(Atom::First, p, k, t);
    let g2 = g_of_t(Atom::Second, p, k, t);
    // unwrap: the gaussian profile is only selected when w_tilde is present
    let om1 = omega_of_t(Atom::First, p, k, t).unwrap();
    let om2 = omega_of_t(Atom::Second, p, k, t).unwrap();
    let mi = C64::new(0.0, -1.0);
    [
        mi * (c[1] * (0.5 * om2)),
        mi * (c[1] * p.laser_detuning + c[2] * g2 + c[0] * (0.5 * om2)),
        mi * (c[2] * (-p.delta) + c[3] * g1 + c[1] * g2),
        mi * (c[3] * p.laser_detuning + c[2] * g1 + c[4] * (0.5 * om1)),
        mi * (c[3] * (0.5 * om1)),
    ]
}

/// Sampled full-model transit plus solver statistics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<FullState>,
    pub stats: SolverStats,
}

impl Trajectory {
    pub fn final_state(&self) -> &FullState {
        self.samples.last().expect("trajectory has samples")
    }

    pub fn final_leakage(&self) -> f64 {
        self.final_state().intermediate_population()
    }
}

/// Number of uniformly spaced output samples recorded by default.
pub const DEFAULT_SAMPLES: usize = 2000;

/// Integrate the transit from t = 0 to the trailing atom leaving the
/// coupling support, recording `n_samples` uniformly spaced states.
pub fn integrate(
    initial: &FullState,
    p: &PhysicalParams,
    k: &Kinematics,
    tol: &Tolerances,
    n_samples: usize,
) -> Result<Trajectory> {
    p.validate()?;
    k.validate()?;
    let norm = initial.norm_sq();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Unnormalized { norm });
    }
    let n_samples = n_samples.max(2);
    let t_end = k.transit_end(p);
    let dt = t_end / (n_samples - 1) as f64;

    let mut samples: Vec<FullState> = Vec::with_capacity(n_samples);
    samples.push(FullState {
        amps: initial.amps,
        t: 0.0,
    });
    let mut next = 1usize;
    let mut max_drift: f64 = 0.0;

    let (y_end, mut stats) = integrate_adaptive_dop853(
        |t, y| rhs_at(t, y, p, k),
        0.0,
        t_end,
        initial.amps,
        tol,
        |step| {
            while next < n_samples - 1 {
                let ts = next as f64 * dt;
                if ts > step.t1 {
                    break;
                }
                samples.push(FullState {
                    amps: step.interpolate(ts),
                    t: ts,
                });
                next += 1;
            }
            let n: f64 = step.y1.iter().map(|c| c.norm_sqr()).sum();
            max_drift = max_drift.max((n - 1.0).abs());
        },
    )?;
    samples.push(FullState {
        amps: y_end,
        t: t_end,
    });
    stats.max_norm_drift = max_drift;
    Ok(Trajectory { samples, stats })
}

/// Doubled instantaneous rotation angle 2 xi from the signed combination of
/// the endpoint amplitudes. For the effective evolution C1 = cos(xi),
/// C5 = -i sin(xi), so 2 Re(i C5 conj(C1)) = sin(2 xi) and
/// |C1|^2 - |C5|^2 = cos(2 xi); the signed atan2 avoids the reflection
/// ambiguity of the folded angle atan2(|C5|, |C1|).
fn doubled_angle(state: &FullState) -> f64 {
    let c1 = state.amps[0];
    let c5 = state.amps[4];
    let sin2 = 2.0 * (C64::new(0.0, 1.0) * c5 * c1.conj()).re;
    let cos2 = c1.norm_sqr() - c5.norm_sqr();
    sin2.atan2(cos2)
}

/// Unwrap the rotation angle across samples by continuity and return the
/// final value. For adiabatic parameters this approximates the asymptotic
/// coupling angle including multiples of pi.
///
/// Errors with [`Error::NonAdiabatic`] when the final intermediate-state
/// population exceeds `leakage_bound`.
pub fn extract_full_angle_with_bound(traj: &Trajectory, leakage_bound: f64) -> Result<f64> {
    let leakage = traj.final_leakage();
    if leakage > leakage_bound {
        return Err(Error::NonAdiabatic {
            leakage,
            bound: leakage_bound,
        });
    }
    let tau = 2.0 * std::f64::consts::PI;
    let mut unwrapped = doubled_angle(&traj.samples[0]);
    for state in &traj.samples[1..] {
        let phi = doubled_angle(state);
        let m = ((unwrapped - phi) / tau).round();
        unwrapped = m * tau + phi;
    }
    Ok(0.5 * unwrapped)
}

/// [`extract_full_angle_with_bound`] at the default leakage bound.
pub fn extract_full_angle(traj: &Trajectory) -> Result<f64> {
    extract_full_angle_with_bound(traj, DEFAULT_LEAKAGE_BOUND)
}
