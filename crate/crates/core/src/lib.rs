//! Simulation and analysis of two four-level atoms crossing a detuned
//! optical cavity while driven by a transverse laser.
//!
//! The crate offers two routes to the same physics. The full model
//! ([`full_dynamics`]) integrates the five coupled amplitude equations of the
//! restricted wave function over a transit. The effective model
//! ([`effective`]) eliminates the intermediate states adiabatically, leaving
//! a single coupling angle theta(v, ell) with a closed form for the constant
//! laser profile. On top of these sit entanglement-entropy maps
//! ([`entanglement`]), a nine-level two-qubit gate lab ([`gates`]), and
//! condition-curve solving with full-model cross-validation ([`atlas`]).
//!
//! Units throughout: angular frequencies in rad/us, lengths in um, times in
//! us, velocities in m/s (numerically identical to um/us).
//!
//! See the `examples/` directory for runnable entry points into each
//! capability, or the `cavity-crossing` binary for the CSV-exporting CLI.

pub mod atlas;
pub mod cli;
pub mod config;
pub mod couplings;
pub mod effective;
pub mod entanglement;
pub mod error;
pub mod full_dynamics;
pub mod gates;
pub mod grid;
pub mod ode;
pub mod params;

pub use config::{load_config, parse_config, Config};
pub use effective::{theta_closed_form, theta_reduced, THETA_PREFACTOR};
pub use entanglement::{entropy_from_theta, von_neumann_entropy};
pub use error::{Error, Result};
pub use full_dynamics::{FullState, Trajectory};
pub use gates::GateKind;
pub use params::{DerivedScales, Kinematics, PhysicalParams};
