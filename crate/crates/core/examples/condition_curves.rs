//! Condition curves theta(v, ell) = theta* in the reduced (v/K, ell/w)
//! plane for the three gate families.
//!
//! Run with `cargo run --release --example condition_curves`.

use cavity_crossing::atlas::{condition_curve, ConditionQuery, ConditionTarget};

fn main() {
    let targets = [
        ("maximal entanglement, theta* = (2n+1) pi/4", ConditionTarget::MaxEntanglement),
        ("i-swap, theta* = 3pi/2 + 2pi n", ConditionTarget::ISwap),
        ("controlled-Z / controlled-NOT-bar, theta* = pi + 2pi n", ConditionTarget::CzCnot),
    ];

    for (label, target) in targets {
        println!("{label}");
        println!("{:>8}  {:>10}  {:>10}  {:>10}", "ell/w", "n=0", "n=1", "n=2");
        let curves: Vec<_> = (0..3)
            .map(|n| {
                condition_curve(&ConditionQuery {
                    target,
                    n,
                    ell_range: (0.0, 3.0),
                    samples: 7,
                })
                .unwrap()
            })
            .collect();
        for i in 0..7 {
            let x = curves[0].points[i].0;
            println!(
                "{:8.2}  {:10.6}  {:10.6}  {:10.6}",
                x, curves[0].points[i].1, curves[1].points[i].1, curves[2].points[i].1
            );
        }
        println!();
    }
    println!("velocities are in units of K; branches nest, higher n at lower v");
}
