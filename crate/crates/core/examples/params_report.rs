//! Derived scales and off-resonance conditions for the reference
//! parameter set.
//!
//! Run with `cargo run --release --example params_report`.

use cavity_crossing::params::{
    check_adiabaticity, derive_scales, PhysicalParams, CONDITION_LABELS,
    DEFAULT_ADIABATICITY_MARGIN,
};

fn main() {
    let p = PhysicalParams::reference();
    println!("reference parameters (angular frequencies in rad/us, lengths in um):");
    println!("  delta = {}, Delta = {}", p.delta, p.laser_detuning);
    println!("  g0 = {}, Omega0 = {}, w = {}", p.g0, p.omega0, p.waist);

    let scales = derive_scales(&p).unwrap();
    println!();
    println!("reduced-coordinate units:");
    println!("  velocity unit K = {:.4} m/s", scales.velocity_unit);
    println!("  distance unit w = {:.1} um", scales.distance_unit);

    let report = check_adiabaticity(&p, DEFAULT_ADIABATICITY_MARGIN);
    println!();
    println!(
        "off-resonance conditions (each ratio must exceed {}):",
        report.margin
    );
    for i in 0..3 {
        println!(
            "  {:22} = {:6.2}  {}",
            CONDITION_LABELS[i],
            report.ratios[i],
            if report.passes[i] { "pass" } else { "FAIL" }
        );
    }
}
