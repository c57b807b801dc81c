//! Condition-curve solving and cross-validation of the closed-form angle
//! against the full five-amplitude model.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::effective::THETA_PREFACTOR;
use crate::error::{Error, Result};
use crate::full_dynamics::{self, FullState, Tolerances};
use crate::params::{check_adiabaticity, derive_scales, Kinematics, PhysicalParams};

/// Target families for the coupling angle theta(v, ell).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConditionTarget {
    /// theta = (2n + 1) pi/4: maximal entanglement.
    MaxEntanglement,
    /// theta = 3pi/2 + 2pi n: the i-swap gate.
    ISwap,
    /// theta = pi + 2pi n: controlled-Z and controlled-NOT-bar.
    CzCnot,
    /// A fixed custom angle (branch index ignored).
    Custom(f64),
}

impl ConditionTarget {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "max-entanglement" | "entanglement" => Ok(ConditionTarget::MaxEntanglement),
            "i-swap" | "iswap" => Ok(ConditionTarget::ISwap),
            "cz-cnot" | "cz" | "cnotbar" => Ok(ConditionTarget::CzCnot),
            _ => Err(Error::UnknownName {
                what: "condition target",
                name: name.to_string(),
            }),
        }
    }

    /// The target angle for branch index n.
    pub fn theta_star(&self, n: u32) -> f64 {
        match *self {
            ConditionTarget::MaxEntanglement => (2.0 * n as f64 + 1.0) * PI / 4.0,
            ConditionTarget::ISwap => 1.5 * PI + 2.0 * PI * n as f64,
            ConditionTarget::CzCnot => PI + 2.0 * PI * n as f64,
            ConditionTarget::Custom(theta) => theta,
        }
    }
}

/// A sampled condition-curve request.
#[derive(Debug, Clone, Copy)]
pub struct ConditionQuery {
    pub target: ConditionTarget,
    pub n: u32,
    /// Separation range in units of w.
    pub ell_range: (f64, f64),
    pub samples: usize,
}

impl ConditionQuery {
    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: "need at least 2 curve samples".to_string(),
            });
        }
        if !(self.ell_range.0 >= 0.0 && self.ell_range.1 > self.ell_range.0) {
            return Err(Error::InvalidParameter {
                name: "ell-range",
                reason: "must be an increasing range within [0, inf)".to_string(),
            });
        }
        Ok(())
    }
}

/// A solved curve in reduced units: ordered (ell/w, v/K) pairs on which
/// theta(v, ell) = theta_star.
#[derive(Debug, Clone)]
pub struct ConditionCurve {
    pub points: Vec<(f64, f64)>,
    pub theta_star: f64,
    pub n: u32,
}

/// Invert the closed-form angle for the velocity:
/// v = sqrt(pi/32) K exp(-ell^2 / 2 w^2) / theta_star.
pub fn solve_velocity(theta_star: f64, ell: f64, p: &PhysicalParams) -> Result<f64> {
    p.validate()?;
    let scales = derive_scales(p)?;
    Ok(solve_velocity_reduced(theta_star, ell / p.waist)? * scales.velocity_unit)
}

/// The reduced-coordinate inversion: v/K for a given theta_star and ell/w.
pub fn solve_velocity_reduced(theta_star: f64, ell_over_w: f64) -> Result<f64> {
    if theta_star <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "theta_star",
            reason: "must be positive".to_string(),
        });
    }
    Ok(THETA_PREFACTOR * (-0.5 * ell_over_w * ell_over_w).exp() / theta_star)
}

/// Sample the analytic inversion across the requested separation range.
pub fn condition_curve(q: &ConditionQuery) -> Result<ConditionCurve> {
    q.validate()?;
    let theta_star = q.target.theta_star(q.n);
    let step = (q.ell_range.1 - q.ell_range.0) / (q.samples - 1) as f64;
    let points = (0..q.samples)
        .map(|i| {
            let x = q.ell_range.0 + i as f64 * step;
            solve_velocity_reduced(theta_star, x).map(|u| (x, u))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionCurve {
        points,
        theta_star,
        n: q.n,
    })
}

/// Full-model check of one curve point.
#[derive(Debug, Clone)]
pub struct PointCheck {
    pub ell_over_w: f64,
    pub v_over_k: f64,
    pub theta_star: f64,
    /// Angle extracted from the integrated five-amplitude model, when the
    /// transit stayed adiabatic.
    pub theta_full: Option<f64>,
    pub leakage: f64,
    pub norm_drift: f64,
    pub within_tolerance: bool,
    pub warning: Option<String>,
}

/// Aggregated cross-validation report for a curve.
#[derive(Debug, Clone)]
pub struct CurveVerification {
    pub points: Vec<PointCheck>,
    pub adiabatic: bool,
    pub tolerance: f64,
}

impl CurveVerification {
    pub fn all_ok(&self) -> bool {
        self.adiabatic && self.points.iter().all(|p| p.within_tolerance)
    }
}

fn check_point(
    ell_over_w: f64,
    v_over_k: f64,
    theta_star: f64,
    p: &PhysicalParams,
    tolerance: f64,
) -> PointCheck {
    let scales = match derive_scales(p) {
        Ok(s) => s,
        Err(e) => {
            return PointCheck {
                ell_over_w,
                v_over_k,
                theta_star,
                theta_full: None,
                leakage: f64::NAN,
                norm_drift: f64::NAN,
                within_tolerance: false,
                warning: Some(e.to_string()),
            }
        }
    };
    let k = Kinematics::new(v_over_k * scales.velocity_unit, ell_over_w * p.waist);
    let traj = match full_dynamics::integrate(
        &FullState::initial_a1(),
        p,
        &k,
        &Tolerances::default(),
        full_dynamics::DEFAULT_SAMPLES,
    ) {
        Ok(t) => t,
        Err(e) => {
            return PointCheck {
                ell_over_w,
                v_over_k,
                theta_star,
                theta_full: None,
                leakage: f64::NAN,
                norm_drift: f64::NAN,
                within_tolerance: false,
                warning: Some(e.to_string()),
            }
        }
    };
    let leakage = traj.final_leakage();
    let norm_drift = traj.stats.max_norm_drift;
    match full_dynamics::extract_full_angle(&traj) {
        Ok(theta_full) => PointCheck {
            ell_over_w,
            v_over_k,
            theta_star,
            theta_full: Some(theta_full),
            leakage,
            norm_drift,
            within_tolerance: (theta_full - theta_star).abs() <= tolerance,
            warning: None,
        },
        Err(e) => PointCheck {
            ell_over_w,
            v_over_k,
            theta_star,
            theta_full: None,
            leakage,
            norm_drift,
            within_tolerance: false,
            warning: Some(e.to_string()),
        },
    }
}

/// Integrate the full model at every curve point and compare the extracted
/// angle against theta_star. A failed adiabaticity precheck is reported,
/// not fatal.
pub fn verify_curve_full_model(
    curve: &ConditionCurve,
    p: &PhysicalParams,
    tolerance: f64,
) -> Result<CurveVerification> {
    p.validate()?;
    let adiabatic = check_adiabaticity(p, crate::params::DEFAULT_ADIABATICITY_MARGIN).all_pass();
    let points = curve
        .points
        .par_iter()
        .map(|&(x, u)| check_point(x, u, curve.theta_star, p, tolerance))
        .collect();
    Ok(CurveVerification {
        points,
        adiabatic,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective::{theta_closed_form, theta_reduced};
    use approx::assert_relative_eq;

    #[test]
    fn curve_endpoint_values() {
        assert_relative_eq!(
            solve_velocity_reduced(PI / 4.0, 0.0).unwrap(),
            0.398942,
            epsilon = 1e-6
        );
        assert_relative_eq!(
            solve_velocity_reduced(PI, 0.0).unwrap(),
            0.099736,
            epsilon = 1e-6
        );
        assert_relative_eq!(
            solve_velocity_reduced(1.5 * PI, 0.0).unwrap(),
            0.066491,
            epsilon = 1e-6
        );
    }

    #[test]
    fn half_width_separation_halves_velocity() {
        let x = (2.0f64 * 2.0f64.ln()).sqrt();
        let v0 = solve_velocity_reduced(PI, 0.0).unwrap();
        let v = solve_velocity_reduced(PI, x).unwrap();
        assert_relative_eq!(v, 0.5 * v0, max_relative = 1e-12);
    }

    #[test]
    fn inversion_round_trips_through_closed_form() {
        let p = PhysicalParams::reference();
        for (theta_star, ell) in [(PI / 4.0, 0.0), (PI, 9.5), (2.3, 20.0)] {
            let v = solve_velocity(theta_star, ell, &p).unwrap();
            let k = Kinematics::new(v, ell);
            assert_relative_eq!(
                theta_closed_form(&p, &k).unwrap(),
                theta_star,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn curves_monotone_and_nested() {
        let q = ConditionQuery {
            target: ConditionTarget::MaxEntanglement,
            n: 0,
            ell_range: (0.0, 3.0),
            samples: 50,
        };
        let c0 = condition_curve(&q).unwrap();
        assert_relative_eq!(c0.points[0].1, 0.398942, epsilon = 1e-6);
        for pair in c0.points.windows(2) {
            assert!(pair[1].1 < pair[0].1, "velocity must decrease with ell");
        }
        let c1 = condition_curve(&ConditionQuery { n: 1, ..q }).unwrap();
        for (a, b) in c0.points.iter().zip(&c1.points) {
            assert!(b.1 < a.1, "higher branches sit at lower velocity");
        }
    }

    #[test]
    fn entropy_is_unity_on_max_entanglement_curves() {
        use crate::entanglement::entropy_from_theta;
        for n in 0..5 {
            let q = ConditionQuery {
                target: ConditionTarget::MaxEntanglement,
                n,
                ell_range: (0.0, 3.0),
                samples: 8,
            };
            let curve = condition_curve(&q).unwrap();
            for &(x, u) in &curve.points {
                let theta = theta_reduced(u, x);
                assert_relative_eq!(theta, curve.theta_star, max_relative = 1e-12);
                assert_relative_eq!(entropy_from_theta(theta), 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn gate_fidelity_is_unity_on_gate_curves() {
        use crate::gates::GateKind;
        for (target, kind) in [
            (ConditionTarget::ISwap, GateKind::ISwap),
            (ConditionTarget::CzCnot, GateKind::ControlledZ),
        ] {
            let q = ConditionQuery {
                target,
                n: 0,
                ell_range: (0.0, 2.0),
                samples: 5,
            };
            let curve = condition_curve(&q).unwrap();
            for &(x, u) in &curve.points {
                let theta = theta_reduced(u, x);
                assert_relative_eq!(
                    kind.fidelity_closed_form(theta),
                    1.0,
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn invalid_queries_rejected() {
        let q = ConditionQuery {
            target: ConditionTarget::MaxEntanglement,
            n: 0,
            ell_range: (2.0, 1.0),
            samples: 10,
        };
        assert!(condition_curve(&q).is_err());
        assert!(solve_velocity_reduced(-1.0, 0.0).is_err());
    }

    #[test]
    fn non_adiabatic_verification_reports_instead_of_crashing() {
        let mut p = PhysicalParams::reference();
        p.g0 = p.delta; // deliberately violates the off-resonance conditions
        let curve = ConditionCurve {
            points: vec![(0.0, 0.4)],
            theta_star: PI / 4.0,
            n: 0,
        };
        let report = verify_curve_full_model(&curve, &p, 0.05).unwrap();
        assert!(!report.adiabatic);
        assert!(!report.all_ok());
    }
}
