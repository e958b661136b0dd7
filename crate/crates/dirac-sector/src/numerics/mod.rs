//! Grids, derivative stencils, the Hardy-quotient minimiser and the
//! deficiency-index shooting oracle.

pub mod fit;
pub mod hardy;
pub mod shooting;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Geometric grid on `[r_min, r_max]`, uniform in `s = ln r`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    r_min: f64,
    r_max: f64,
    nodes: Vec<f64>,
    /// Spacing in the log variable.
    step: f64,
}

impl LogGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if !(r_min.is_finite() && r_max.is_finite()) || r_min <= 0.0 || r_max <= r_min {
            return Err(Error::InvalidGrid(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if n < 16 {
            return Err(Error::InvalidGrid(format!("need n >= 16 nodes, got {n}")));
        }
        let step = (r_max / r_min).ln() / (n - 1) as f64;
        let nodes = (0..n)
            .map(|i| {
                if i == n - 1 {
                    r_max
                } else {
                    r_min * (i as f64 * step).exp()
                }
            })
            .collect();
        Ok(Self { r_min, r_max, nodes, step })
    }

    /// General-purpose default: nine decades around unity, dense enough for
    /// power-law exponent fits with margin.
    pub fn default_wide() -> Self {
        Self::new(1e-6, 1e3, 4000).expect("static grid parameters are valid")
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Log-variable spacing `ln(r_{i+1}/r_i)`.
    pub fn log_step(&self) -> f64 {
        self.step
    }

    pub fn decades(&self) -> f64 {
        (self.r_max / self.r_min).log10()
    }
}

/// `d/dr` of complex samples on a log grid: second-order centred stencils in
/// the log variable, one-sided second-order stencils at the ends, with the
/// exact chain-rule factor `1/r`.
pub fn derivative(grid: &LogGrid, values: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = grid.len();
    if values.len() != n {
        return Err(Error::GridMismatch(format!(
            "{} samples on a {n}-node grid",
            values.len()
        )));
    }
    if n < 5 {
        return Err(Error::InvalidGrid("derivative needs >= 5 nodes".into()));
    }
    let h = grid.log_step();
    let r = grid.nodes();
    let mut out = vec![Complex64::default(); n];
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h * r[0]);
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h * r[n - 1]);
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * h * r[i]);
    }
    Ok(out)
}

/// Trapezoid weights for `∫ f(r) dr` on the log grid (uniform trapezoid in
/// the log variable with the Jacobian `r`).
pub fn integration_weights(grid: &LogGrid) -> Vec<f64> {
    let h = grid.log_step();
    let n = grid.len();
    grid.nodes()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let w = if i == 0 || i == n - 1 { 0.5 * h } else { h };
            w * r
        })
        .collect()
}
