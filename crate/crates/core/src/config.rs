//! Structured text configuration: one `key = value` pair per line, `#`
//! comments. Keys mirror the physical-parameter and kinematics fields.
//!
//! Keys: `delta`, `Delta`, `g0`, `Omega0`, `w` (all required), `w_tilde`,
//! `v`, `ell`, `z_mid`, `window_sigma` (optional). Angular frequencies are
//! in rad/us, lengths in um, velocities in m/s. When `w_tilde` is omitted
//! the atom-laser coupling is constant; the default `w_tilde = 5 w` used by
//! gaussian-laser examples is a documented choice, not a quoted value.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::params::{Kinematics, PhysicalParams, DEFAULT_WINDOW_SIGMA};

/// Parsed configuration: physical parameters plus optional kinematics.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub params: PhysicalParams,
    pub velocity: Option<f64>,
    pub separation: Option<f64>,
    pub midpoint: Option<f64>,
    pub window_sigma: f64,
}

impl Config {
    /// Build kinematics, with explicit arguments taking precedence over the
    /// config file.
    pub fn kinematics(&self, velocity: Option<f64>, separation: Option<f64>) -> Result<Kinematics> {
        let v = velocity.or(self.velocity).ok_or(Error::MissingKey("v"))?;
        let ell = separation
            .or(self.separation)
            .ok_or(Error::MissingKey("ell"))?;
        let k = Kinematics {
            velocity: v,
            separation: ell,
            midpoint: self.midpoint,
            window_sigma: self.window_sigma,
        };
        k.validate()?;
        Ok(k)
    }

    /// Echo of the resolved parameters, used in CSV comment headers.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("delta".to_string(), format!("{}", self.params.delta)),
            ("Delta".to_string(), format!("{}", self.params.laser_detuning)),
            ("g0".to_string(), format!("{}", self.params.g0)),
            ("Omega0".to_string(), format!("{}", self.params.omega0)),
            ("w".to_string(), format!("{}", self.params.waist)),
        ];
        if let Some(wt) = self.params.laser_waist {
            out.push(("w_tilde".to_string(), format!("{wt}")));
        }
        if let Some(v) = self.velocity {
            out.push(("v".to_string(), format!("{v}")));
        }
        if let Some(ell) = self.separation {
            out.push(("ell".to_string(), format!("{ell}")));
        }
        if let Some(z) = self.midpoint {
            out.push(("z_mid".to_string(), format!("{z}")));
        }
        out.push(("window_sigma".to_string(), format!("{}", self.window_sigma)));
        out
    }
}

/// Parse a configuration from text. Errors name the offending key and line.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut values: BTreeMap<&str, f64> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Malformed {
                line,
                text: content.to_string(),
            });
        };
        let key = key.trim();
        let value = value.trim();
        const KEYS: [&str; 10] = [
            "delta",
            "Delta",
            "g0",
            "Omega0",
            "w",
            "w_tilde",
            "v",
            "ell",
            "z_mid",
            "window_sigma",
        ];
        let Some(&canonical) = KEYS.iter().find(|&&k| k == key) else {
            return Err(Error::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        let parsed: f64 = value.parse().map_err(|_| Error::BadValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
        })?;
        values.insert(canonical, parsed);
    }

    let require = |key: &'static str| values.get(key).copied().ok_or(Error::MissingKey(key));
    let params = PhysicalParams {
        delta: require("delta")?,
        laser_detuning: require("Delta")?,
        g0: require("g0")?,
        omega0: require("Omega0")?,
        waist: require("w")?,
        laser_waist: values.get("w_tilde").copied(),
    };
    params.validate()?;
    Ok(Config {
        params,
        velocity: values.get("v").copied(),
        separation: values.get("ell").copied(),
        midpoint: values.get("z_mid").copied(),
        window_sigma: values
            .get("window_sigma")
            .copied()
            .unwrap_or(DEFAULT_WINDOW_SIGMA),
    })
}

/// Read and parse a configuration file.
pub fn load_config(path: &Path) -> Result<Config> {
    parse_config(&std::fs::read_to_string(path)?)
}

/// The reference parameter set as config text.
pub const REFERENCE_CONFIG: &str = "\
# detuned-cavity transit, reference parameter set
delta = 360        # cavity detuning (rad/us)
Delta = 380        # laser detuning (rad/us)
g0 = 27            # vacuum Rabi frequency (rad/us)
Omega0 = 50        # peak atom-laser coupling (rad/us)
w = 13             # cavity mode waist (um)
";
