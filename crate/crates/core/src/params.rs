//! Physical parameters, unit conventions, derived scales, and adiabaticity
//! checks.
//!
//! Unit conventions used throughout the crate:
//! angular frequencies in rad/us, lengths in um, times in us, and velocities
//! in m/s (numerically identical to um/us).

use crate::error::{Error, Result};

/// Fixed cavity/laser knobs of the experiment.
///
/// `delta` is the cavity detuning, `laser_detuning` the laser detuning Delta.
/// When `laser_waist` is `None` the atom-laser coupling is constant at
/// `omega0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Cavity detuning delta (rad/us).
    pub delta: f64,
    /// Laser detuning Delta (rad/us).
    pub laser_detuning: f64,
    /// Vacuum Rabi frequency g_0 (rad/us).
    pub g0: f64,
    /// Peak atom-laser coupling Omega_0 (rad/us).
    pub omega0: f64,
    /// Cavity mode waist w (um).
    pub waist: f64,
    /// Laser beam waist (um); `None` means constant atom-laser coupling.
    pub laser_waist: Option<f64>,
}

impl PhysicalParams {
    /// The parameter set quoted in the source analysis: delta = 360,
    /// Delta = 380, g_0 = 27, Omega_0 = 50 (all rad/us), w = 13 um,
    /// constant laser coupling.
    pub fn reference() -> Self {
        PhysicalParams {
            delta: 360.0,
            laser_detuning: 380.0,
            g0: 27.0,
            omega0: 50.0,
            waist: 13.0,
            laser_waist: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn check(name: &'static str, ok: bool, reason: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: reason.to_string(),
                })
            }
        }
        check("delta", self.delta != 0.0, "must be nonzero")?;
        check("Delta", self.laser_detuning != 0.0, "must be nonzero")?;
        check("g0", self.g0 > 0.0, "must be positive")?;
        check("Omega0", self.omega0 > 0.0, "must be positive")?;
        check("w", self.waist > 0.0, "must be positive")?;
        if let Some(wt) = self.laser_waist {
            check("w_tilde", wt >= self.waist, "must be >= w")?;
        }
        Ok(())
    }

    /// True when the atom-laser coupling is position-independent.
    pub fn constant_laser(&self) -> bool {
        self.laser_waist.is_none()
    }
}

/// Transit geometry: common atomic speed, initial separation, and the
/// integration window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    /// Common atomic speed along z (m/s = um/us).
    pub velocity: f64,
    /// Initial inter-atomic distance ell = z1 - z2 > 0 (um).
    pub separation: f64,
    /// Initial midpoint position (um); `None` places the pair so that the
    /// leading atom starts at the window edge.
    pub midpoint: Option<f64>,
    /// Half-width of the integration window in units of the cavity waist.
    pub window_sigma: f64,
}

pub const DEFAULT_WINDOW_SIGMA: f64 = 8.0;

impl Kinematics {
    pub fn new(velocity: f64, separation: f64) -> Self {
        Kinematics {
            velocity,
            separation,
            midpoint: None,
            window_sigma: DEFAULT_WINDOW_SIGMA,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.velocity > 0.0) {
            return Err(Error::InvalidParameter {
                name: "v",
                reason: "must be positive".to_string(),
            });
        }
        if !(self.separation >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "ell",
                reason: "must be non-negative".to_string(),
            });
        }
        if !(self.window_sigma >= 6.0) {
            return Err(Error::InvalidParameter {
                name: "window_sigma",
                reason: "must be >= 6".to_string(),
            });
        }
        Ok(())
    }

    /// Initial midpoint position; defaults to putting the leading atom at the
    /// lower window edge at t = 0.
    pub fn midpoint_or_default(&self, p: &PhysicalParams) -> f64 {
        self.midpoint
            .unwrap_or(-(self.window_sigma * p.waist + self.separation / 2.0))
    }

    /// Initial position of the leading atom (atom 1).
    pub fn z1_initial(&self, p: &PhysicalParams) -> f64 {
        self.midpoint_or_default(p) + self.separation / 2.0
    }

    /// Initial position of the trailing atom (atom 2).
    pub fn z2_initial(&self, p: &PhysicalParams) -> f64 {
        self.midpoint_or_default(p) - self.separation / 2.0
    }

    /// Time at which the midpoint of the pair crosses the waist center.
    pub fn crossing_time(&self, p: &PhysicalParams) -> f64 {
        -self.midpoint_or_default(p) / self.velocity
    }

    /// Integration window [0, t_end]: from the leading atom entering the
    /// coupling support to the trailing atom leaving it.
    pub fn transit_end(&self, p: &PhysicalParams) -> f64 {
        (self.window_sigma * p.waist - self.z2_initial(p)) / self.velocity
    }
}

/// Velocity and distance units of the reduced (v/K, ell/w) coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales {
    /// K = Omega_0^2 g_0^2 w / (delta Delta^2), in m/s.
    pub velocity_unit: f64,
    /// The cavity waist w, in um.
    pub distance_unit: f64,
}

/// Compute the reduced-coordinate units for a parameter set.
pub fn derive_scales(p: &PhysicalParams) -> Result<DerivedScales> {
    p.validate()?;
    let velocity_unit =
        p.omega0.powi(2) * p.g0.powi(2) * p.waist / (p.delta * p.laser_detuning.powi(2));
    Ok(DerivedScales {
        velocity_unit,
        distance_unit: p.waist,
    })
}

/// The three off-resonance ratios with pass flags against a margin.
#[derive(Debug, Clone, Copy)]
pub struct AdiabaticityReport {
    /// |delta| / g_0, |Delta| / Omega_0, |delta Delta| / g_0^2.
    pub ratios: [f64; 3],
    pub passes: [bool; 3],
    pub margin: f64,
}

impl AdiabaticityReport {
    pub fn all_pass(&self) -> bool {
        self.passes.iter().all(|&p| p)
    }
}

pub const CONDITION_LABELS: [&str; 3] = ["|delta| / g0", "|Delta| / Omega0", "|delta Delta| / g0^2"];

/// Evaluate the off-resonance conditions at peak couplings. Since
/// |g(t)| <= g_0 and |Omega(t)| <= Omega_0, the peak values bound all times.
pub fn check_adiabaticity(p: &PhysicalParams, margin: f64) -> AdiabaticityReport {
    let ratios = [
        p.delta.abs() / p.g0,
        p.laser_detuning.abs() / p.omega0,
        (p.delta * p.laser_detuning).abs() / p.g0.powi(2),
    ];
    AdiabaticityReport {
        ratios,
        passes: [
            ratios[0] >= margin,
            ratios[1] >= margin,
            ratios[2] >= margin,
        ],
        margin,
    }
}

pub const DEFAULT_ADIABATICITY_MARGIN: f64 = 5.0;
