//! Reduced density matrix and von Neumann entropy of the first hyperfine
//! qubit, and entropy maps over the (v/K, ell/w) plane.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::effective::theta_reduced;
use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Eigenvalues in [-EIGENVALUE_CLAMP, 0) are clamped to zero before taking
/// logarithms.
pub const EIGENVALUE_CLAMP: f64 = 1e-12;

/// 2x2 Hermitian density matrix of one qubit, with cached eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensity {
    pub rho: [[C64; 2]; 2],
    eigenvalues: [f64; 2],
}

impl QubitDensity {
    fn from_matrix(rho: [[C64; 2]; 2]) -> Self {
        // closed-form eigenvalues of a 2x2 Hermitian matrix
        let a = rho[0][0].re;
        let d = rho[1][1].re;
        let off = rho[0][1].norm_sqr();
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + off).sqrt();
        QubitDensity {
            rho,
            eigenvalues: [mean + disc, mean - disc],
        }
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        self.eigenvalues
    }

    pub fn trace(&self) -> f64 {
        self.rho[0][0].re + self.rho[1][1].re
    }
}

/// Partial trace over the second qubit of a pure two-qubit state given as
/// amplitudes on (|0,0>, |0,1>, |1,0>, |1,1>).
pub fn reduce_first_qubit(state: &[C64; 4]) -> Result<QubitDensity> {
    let norm: f64 = state.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::Unnormalized { norm });
    }
    let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for b in 0..2 {
                rho[i][j] += state[2 * i + b] * state[2 * j + b].conj();
            }
        }
    }
    Ok(QubitDensity::from_matrix(rho))
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Von Neumann entropy -sum lambda_i log2 lambda_i in bits.
pub fn von_neumann_entropy(rho: &QubitDensity) -> f64 {
    rho.eigenvalues()
        .iter()
        .map(|&l| {
            let l = if (-EIGENVALUE_CLAMP..0.0).contains(&l) {
                0.0
            } else {
                l
            };
            -xlog2x(l)
        })
        .sum()
}

/// Entropy of the state cos(theta)|0,1> - i sin(theta)|1,0>:
/// -cos^2 log2 cos^2 - sin^2 log2 sin^2.
pub fn entropy_from_theta(theta: f64) -> f64 {
    let c2 = theta.cos().powi(2);
    let s2 = theta.sin().powi(2);
    -xlog2x(c2) - xlog2x(s2)
}

/// Entropy map E(v/K, ell/w) over a grid; rows are velocity samples.
pub fn entropy_map(grid: &GridSpec) -> Result<Vec<Vec<f64>>> {
    grid.validate()?;
    let ells = grid.ell_over_w.values();
    Ok(grid
        .v_over_k
        .values()
        .par_iter()
        .map(|&v| {
            ells.iter()
                .map(|&x| entropy_from_theta(theta_reduced(v, x)))
                .collect()
        })
        .collect())
}
