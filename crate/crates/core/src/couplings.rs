//! Time-dependent Gaussian atom-cavity and atom-laser coupling profiles.

use crate::error::{Error, Result};
use crate::params::{Kinematics, PhysicalParams};

/// Which atom a coupling track belongs to. Atom 1 leads, atom 2 trails by
/// the separation ell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    First,
    Second,
}

impl Atom {
    pub fn initial_position(self, p: &PhysicalParams, k: &Kinematics) -> f64 {
        match self {
            Atom::First => k.z1_initial(p),
            Atom::Second => k.z2_initial(p),
        }
    }
}

/// Coupling profile kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Cavity,
    LaserGaussian,
    LaserConstant,
}

/// One atom's coupling to either the cavity mode or the laser beam.
#[derive(Debug, Clone, Copy)]
pub struct CouplingTrack {
    pub atom: Atom,
    pub kind: ProfileKind,
}

impl CouplingTrack {
    pub fn cavity(atom: Atom) -> Self {
        CouplingTrack {
            atom,
            kind: ProfileKind::Cavity,
        }
    }

    /// Laser track matching the parameter set: gaussian when `w_tilde` is
    /// set, constant otherwise.
    pub fn laser(atom: Atom, p: &PhysicalParams) -> Self {
        CouplingTrack {
            atom,
            kind: if p.constant_laser() {
                ProfileKind::LaserConstant
            } else {
                ProfileKind::LaserGaussian
            },
        }
    }
}

/// Gaussian envelope, clipped to exactly zero outside the integration
/// support |z| > window_sigma * w.
fn envelope(z: f64, peak: f64, width: f64, support: f64) -> f64 {
    if z.abs() > support {
        0.0
    } else {
        peak * (-(z * z) / (width * width)).exp()
    }
}

/// Atom-cavity coupling g_mu(t) = g_0 exp(-(z0 + v t)^2 / w^2).
pub fn g_of_t(atom: Atom, p: &PhysicalParams, k: &Kinematics, t: f64) -> f64 {
    let z = atom.initial_position(p, k) + k.velocity * t;
    envelope(z, p.g0, p.waist, k.window_sigma * p.waist)
}

/// Atom-laser coupling Omega_mu(t): constant Omega_0, or a gaussian with
/// waist `w_tilde` when configured.
pub fn omega_of_t(atom: Atom, p: &PhysicalParams, k: &Kinematics, t: f64) -> Result<f64> {
    match p.laser_waist {
        None => Ok(p.omega0),
        Some(wt) => {
            let z = atom.initial_position(p, k) + k.velocity * t;
            Ok(envelope(z, p.omega0, wt, k.window_sigma * p.waist))
        }
    }
}

/// Evaluate an arbitrary coupling track at time t.
pub fn coupling_value(
    track: &CouplingTrack,
    p: &PhysicalParams,
    k: &Kinematics,
    t: f64,
) -> Result<f64> {
    match track.kind {
        ProfileKind::Cavity => Ok(g_of_t(track.atom, p, k, t)),
        ProfileKind::LaserConstant => Ok(p.omega0),
        ProfileKind::LaserGaussian => {
            if p.laser_waist.is_none() {
                return Err(Error::MissingLaserWaist);
            }
            omega_of_t(track.atom, p, k, t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup() -> (PhysicalParams, Kinematics) {
        (PhysicalParams::reference(), Kinematics::new(0.2, 13.0))
    }

    #[test]
    fn cavity_peak_at_waist_center() {
        let (p, k) = setup();
        // atom 1 crosses z = 0 at t = -z1 / v
        let t = -k.z1_initial(&p) / k.velocity;
        assert_relative_eq!(g_of_t(Atom::First, &p, &k, t), p.g0, max_relative = 1e-12);
    }

    #[test]
    fn cavity_one_waist_displacement() {
        let (p, k) = setup();
        let t = (-k.z1_initial(&p) + p.waist) / k.velocity;
        assert_relative_eq!(
            g_of_t(Atom::First, &p, &k, t),
            p.g0 * (-1.0f64).exp(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn cavity_three_waist_displacement() {
        let (p, k) = setup();
        let t = (-k.z1_initial(&p) + 3.0 * p.waist) / k.velocity;
        assert_relative_eq!(
            g_of_t(Atom::First, &p, &k, t),
            p.g0 * (-9.0f64).exp(),
            max_relative = 1e-10
        );
        assert_relative_eq!(
            g_of_t(Atom::First, &p, &k, t) / p.g0,
            1.234e-4,
            max_relative = 1e-3
        );
    }

    #[test]
    fn zero_outside_support() {
        let (p, k) = setup();
        assert_eq!(g_of_t(Atom::First, &p, &k, -1.0), 0.0);
        let t_past = (-k.z1_initial(&p) + 8.5 * p.waist) / k.velocity;
        assert_eq!(g_of_t(Atom::First, &p, &k, t_past), 0.0);
    }

    #[test]
    fn constant_laser_everywhere() {
        let (p, k) = setup();
        for t in [0.0, 17.0, 1e4] {
            assert_eq!(omega_of_t(Atom::Second, &p, &k, t).unwrap(), p.omega0);
        }
    }

    #[test]
    fn gaussian_laser_peak_and_tail() {
        let (mut p, k) = setup();
        p.laser_waist = Some(5.0 * p.waist);
        let t_peak = -k.z1_initial(&p) / k.velocity;
        assert_relative_eq!(
            omega_of_t(Atom::First, &p, &k, t_peak).unwrap(),
            p.omega0,
            max_relative = 1e-12
        );
        let t = (-k.z1_initial(&p) + p.waist) / k.velocity;
        assert_relative_eq!(
            omega_of_t(Atom::First, &p, &k, t).unwrap(),
            p.omega0 * (-1.0f64 / 25.0).exp(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn gaussian_track_without_waist_is_an_error() {
        let (p, k) = setup();
        let track = CouplingTrack {
            atom: Atom::First,
            kind: ProfileKind::LaserGaussian,
        };
        assert!(coupling_value(&track, &p, &k, 0.0).is_err());
    }

    #[test]
    fn mirror_symmetry_about_crossing() {
        let (p, k) = setup();
        let t_cross = -k.z1_initial(&p) / k.velocity;
        for dt in [1.0, 5.0, 40.0] {
            assert_relative_eq!(
                g_of_t(Atom::First, &p, &k, t_cross - dt),
                g_of_t(Atom::First, &p, &k, t_cross + dt),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn tracks_shifted_by_transit_delay() {
        let (p, k) = setup();
        let delay = k.separation / k.velocity;
        for t in [100.0, 300.0, 600.0] {
            assert_relative_eq!(
                g_of_t(Atom::First, &p, &k, t),
                g_of_t(Atom::Second, &p, &k, t + delay),
                max_relative = 1e-12
            );
        }
    }
}
