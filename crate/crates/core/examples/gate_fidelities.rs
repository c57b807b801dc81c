//! Pulse-sequence gates: identities at the condition angles and the
//! fidelity curves away from them.
//!
//! Run with `cargo run --release --example gate_fidelities`.

use std::f64::consts::PI;

use cavity_crossing::gates::{gate_fidelity, ideal_gate, run_sequence, GateKind};

fn main() {
    println!("gate identities at the condition angles:");
    // the controlled-NOT-bar sequence realizes -U, so compare up to the
    // global phase it actually produces
    for (kind, theta, phase, label) in [
        (GateKind::ISwap, 1.5 * PI, 1.0, "i-swap at 3pi/2"),
        (GateKind::ControlledZ, PI, 1.0, "controlled-Z at pi"),
        (GateKind::ControlledNotBar, PI, -1.0, "controlled-NOT-bar at pi"),
    ] {
        let result = run_sequence(kind.diagram(), theta);
        let mut target = ideal_gate(kind);
        target.matrix.mapv_inplace(|c| c * phase);
        println!(
            "  {label:25} fidelity = {:.12}, leakage = {:.2e}, distance to ideal = {:.2e}",
            result.fidelity,
            result.operator.leakage_norm,
            result.operator.frobenius_distance(&target)
        );
    }

    println!();
    println!("fidelity away from the condition angle:");
    println!("{:>10}  {:>10}  {:>10}", "theta/pi", "i-swap", "cz/cnotbar");
    for i in 0..=16 {
        let theta = i as f64 * 2.0 * PI / 16.0;
        println!(
            "{:10.3}  {:10.6}  {:10.6}",
            theta / PI,
            gate_fidelity(GateKind::ISwap, theta),
            gate_fidelity(GateKind::ControlledZ, theta)
        );
    }

    println!();
    println!("the columns follow 1 - sqrt((1 + sin theta)/2) and 1 - sqrt((1 + cos theta)/2)");
}
