//! Von Neumann entropy of the first qubit over the (v/K, ell/w) plane,
//! rendered as a coarse character map. The bright ridges are the lines of
//! maximal entanglement.
//!
//! Run with `cargo run --release --example entropy_map`.

use cavity_crossing::entanglement::entropy_map;
use cavity_crossing::grid::{Axis, GridSpec};

const SHADES: &[u8] = b" .:-=+*#%@";

fn main() {
    let grid = GridSpec {
        v_over_k: Axis::new(0.01, 0.5, 40),
        ell_over_w: Axis::new(0.0, 2.0, 64),
    };
    let map = entropy_map(&grid).unwrap();

    println!("entropy E(v/K, ell/w); rows run from high to low velocity");
    println!();
    for (v, row) in grid.v_over_k.values().iter().zip(&map).rev() {
        let line: String = row
            .iter()
            .map(|&e| {
                let idx = (e * (SHADES.len() - 1) as f64).round() as usize;
                SHADES[idx.min(SHADES.len() - 1)] as char
            })
            .collect();
        println!("v/K = {v:5.3} |{line}|");
    }
    println!("{:13}ell/w from 0 to 2", "");
}
