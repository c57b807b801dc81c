//! Rectangular sweep grids in reduced coordinates (v/K, ell/w).

use crate::error::{Error, Result};

/// Uniformly sampled axis, inclusive of both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub samples: usize,
}

impl Axis {
    pub fn new(start: f64, end: f64, samples: usize) -> Self {
        Axis {
            start,
            end,
            samples,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.samples == 1 {
            return vec![self.start];
        }
        let step = (self.end - self.start) / (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| self.start + i as f64 * step)
            .collect()
    }
}

/// A (v/K, ell/w) grid; rows run over velocity, columns over separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub v_over_k: Axis,
    pub ell_over_w: Axis,
}

impl GridSpec {
    /// The default figure-reproduction grid: v/K in (0, 1.2], ell/w in
    /// [0, 3], 200 x 200.
    pub fn default_figure() -> Self {
        GridSpec {
            v_over_k: Axis::new(1.2 / 200.0, 1.2, 200),
            ell_over_w: Axis::new(0.0, 3.0, 200),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, axis) in [("v-range", &self.v_over_k), ("ell-range", &self.ell_over_w)] {
            if axis.samples == 0 {
                return Err(Error::InvalidParameter {
                    name: "grid",
                    reason: format!("{name}: sample count must be positive"),
                });
            }
            if axis.samples > 1 && axis.end <= axis.start {
                return Err(Error::InvalidParameter {
                    name: "grid",
                    reason: format!("{name}: end must exceed start"),
                });
            }
        }
        if self.v_over_k.start <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "v-range must be positive".to_string(),
            });
        }
        Ok(())
    }
}
