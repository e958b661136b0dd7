//! Unitary decomposition of sector fields into radial channels and the
//! channelwise action of the massless operator.
//!
//! A field on the sector is expanded as
//! `psi(r, theta) = r^{-1/2} sum_k [u_k^+(r) f_k^+(theta) + u_k^-(r) f_k^-(theta)]`;
//! the `r^{-1/2}` Jacobian factor lives inside the transform so that the
//! flat `dr` norm of the coefficients matches the area norm of the field.
//! On fields band-limited to the represented channels the decomposition is
//! exact up to quadrature roundoff, because the composite trapezoid rule
//! integrates the mode products exactly.

use num_complex::Complex64;

use crate::angular::{AngularGrid, AngularMode, ModeSign};
use crate::error::{Error, Result};
use crate::numerics::{integration_weights, LogGrid};
use crate::params::SectorCoupling;
use crate::radial::{RadialExpression, RadialSample};

/// Two-component complex field sampled on an `(r, theta)` tensor grid,
/// row-major with `theta` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarField {
    r_grid: LogGrid,
    theta_grid: AngularGrid,
    values: Vec<[Complex64; 2]>,
}

impl PolarField {
    pub fn new(r_grid: LogGrid, theta_grid: AngularGrid, values: Vec<[Complex64; 2]>) -> Result<Self> {
        if values.len() != r_grid.len() * theta_grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {} x {} tensor grid",
                values.len(),
                r_grid.len(),
                theta_grid.len()
            )));
        }
        Ok(Self { r_grid, theta_grid, values })
    }

    pub fn from_fn(
        r_grid: LogGrid,
        theta_grid: AngularGrid,
        f: impl Fn(f64, f64) -> [Complex64; 2],
    ) -> Self {
        let mut values = Vec::with_capacity(r_grid.len() * theta_grid.len());
        for &r in r_grid.nodes() {
            for &theta in theta_grid.nodes() {
                values.push(f(r, theta));
            }
        }
        Self { r_grid, theta_grid, values }
    }

    pub fn zeros(r_grid: LogGrid, theta_grid: AngularGrid) -> Self {
        let n = r_grid.len() * theta_grid.len();
        Self { r_grid, theta_grid, values: vec![[Complex64::default(); 2]; n] }
    }

    pub fn r_grid(&self) -> &LogGrid {
        &self.r_grid
    }

    pub fn theta_grid(&self) -> &AngularGrid {
        &self.theta_grid
    }

    pub fn values(&self) -> &[[Complex64; 2]] {
        &self.values
    }

    pub fn at(&self, ir: usize, itheta: usize) -> [Complex64; 2] {
        self.values[ir * self.theta_grid.len() + itheta]
    }

    pub fn at_mut(&mut self, ir: usize, itheta: usize) -> &mut [Complex64; 2] {
        &mut self.values[ir * self.theta_grid.len() + itheta]
    }

    /// Squared area norm `∫∫ |psi|^2 r dr dtheta` by tensor quadrature
    /// (trapezoid in both variables, polar Jacobian included).
    pub fn norm_sq(&self) -> f64 {
        let r_weights = integration_weights(&self.r_grid);
        let t_weights = self.theta_grid.weights();
        let nt = self.theta_grid.len();
        let mut acc = 0.0;
        for (ir, &wr) in r_weights.iter().enumerate() {
            let jacobian = self.r_grid.nodes()[ir];
            for (it, &wt) in t_weights.iter().enumerate() {
                let [a, b] = self.values[ir * nt + it];
                acc += wr * jacobian * wt * (a.norm_sqr() + b.norm_sqr());
            }
        }
        acc
    }

    /// Worst defect of the infinite-mass edge conditions over all radii:
    /// `psi_1 = psi_2` on the first edge, `psi_2 = -e^{i omega} psi_1` on
    /// the second.
    pub fn boundary_condition_residual(&self) -> f64 {
        let omega = self.theta_grid.omega();
        let phase = Complex64::new(0.0, omega).exp();
        let nt = self.theta_grid.len();
        let mut worst = 0.0f64;
        for ir in 0..self.r_grid.len() {
            let first = self.values[ir * nt];
            let last = self.values[ir * nt + nt - 1];
            worst = worst.max((first[0] - first[1]).norm());
            worst = worst.max((last[1] + phase * last[0]).norm());
        }
        worst
    }
}

/// Channel coefficients of a field: channel `k` stores `(u_k^+, u_k^-)` as
/// the two components of one radial sample. All channels share one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCoefficients {
    omega: f64,
    channels: Vec<RadialSample>,
}

impl ChannelCoefficients {
    pub fn new(omega: f64, channels: Vec<RadialSample>) -> Result<Self> {
        crate::params::validate_omega(omega)?;
        if channels.is_empty() {
            return Err(Error::GridMismatch("need at least one channel".into()));
        }
        let grid = channels[0].grid().clone();
        for (k, ch) in channels.iter().enumerate() {
            if ch.grid() != &grid {
                return Err(Error::GridMismatch(format!(
                    "channel {k} uses a different radial grid"
                )));
            }
        }
        Ok(Self { omega, channels })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn channels(&self) -> &[RadialSample] {
        &self.channels
    }

    pub fn grid(&self) -> &LogGrid {
        self.channels[0].grid()
    }

    /// Sum of the flat `dr` squared norms of all coefficients.
    pub fn norm_sq(&self) -> f64 {
        let weights = integration_weights(self.grid());
        self.channels
            .iter()
            .map(|ch| {
                ch.values()
                    .iter()
                    .zip(&weights)
                    .map(|(&[a, b], &w)| w * (a.norm_sqr() + b.norm_sqr()))
                    .sum::<f64>()
            })
            .sum()
    }
}

fn mode_table(omega: f64, big_k: usize, grid: &AngularGrid) -> Result<Vec<[[Complex64; 2]; 2]>> {
    // [k][sign] spinor values per theta node, sign 0 = plus, 1 = minus.
    let mut table = Vec::with_capacity(big_k * grid.len());
    for k in 0..big_k {
        let plus = AngularMode::new(omega, k, ModeSign::Plus)?;
        let minus = AngularMode::new(omega, k, ModeSign::Minus)?;
        for &theta in grid.nodes() {
            table.push([plus.eval_unchecked(theta), minus.eval_unchecked(theta)]);
        }
    }
    Ok(table)
}

fn require_band_limit(omega: f64, big_k: usize, grid: &AngularGrid) -> Result<()> {
    if big_k == 0 {
        return Err(Error::Resolution {
            what: "channel count",
            needed: ">= 1".into(),
            got: "0".into(),
        });
    }
    let highest = crate::params::lambda_of(omega, big_k - 1)? + 0.5;
    grid.require_resolves(highest, 8.0)
}

/// Project a field onto its first `big_k` channels:
/// `u_k^{+-}(r) = sqrt(r) <f_k^{+-}, psi(r, .)>` by angular quadrature.
pub fn decompose(field: &PolarField, big_k: usize) -> Result<ChannelCoefficients> {
    let omega = field.theta_grid().omega();
    require_band_limit(omega, big_k, field.theta_grid())?;
    let table = mode_table(omega, big_k, field.theta_grid())?;
    let nt = field.theta_grid().len();
    let weights = field.theta_grid().weights();

    let mut channels = Vec::with_capacity(big_k);
    for k in 0..big_k {
        let mut values = Vec::with_capacity(field.r_grid().len());
        for (ir, &r) in field.r_grid().nodes().iter().enumerate() {
            let root = r.sqrt();
            let mut acc = [Complex64::default(); 2];
            for it in 0..nt {
                let psi = field.values[ir * nt + it];
                let modes = table[k * nt + it];
                for (slot, acc_slot) in acc.iter_mut().enumerate() {
                    let f = modes[slot];
                    *acc_slot += weights[it] * (f[0].conj() * psi[0] + f[1].conj() * psi[1]);
                }
            }
            values.push([root * acc[0], root * acc[1]]);
        }
        channels.push(RadialSample::new(field.r_grid().clone(), values)?);
    }
    ChannelCoefficients::new(omega, channels)
}

/// Evaluate the channel sum on a tensor grid.
pub fn reconstruct(coeffs: &ChannelCoefficients, theta_grid: &AngularGrid) -> Result<PolarField> {
    let omega = coeffs.omega();
    if (theta_grid.omega() - omega).abs() > 1e-12 * omega {
        return Err(Error::GridMismatch(format!(
            "coefficients live on omega={}, grid spans {}",
            omega,
            theta_grid.omega()
        )));
    }
    require_band_limit(omega, coeffs.channel_count(), theta_grid)?;
    let table = mode_table(omega, coeffs.channel_count(), theta_grid)?;
    let nt = theta_grid.len();
    let r_grid = coeffs.grid().clone();

    let mut values = vec![[Complex64::default(); 2]; r_grid.len() * nt];
    for (ir, &r) in r_grid.nodes().iter().enumerate() {
        let inv_root = 1.0 / r.sqrt();
        for (k, channel) in coeffs.channels().iter().enumerate() {
            let [up, um] = channel.values()[ir];
            for it in 0..nt {
                let [fp, fm] = table[k * nt + it];
                let slot = &mut values[ir * nt + it];
                for c in 0..2 {
                    slot[c] += inv_root * (up * fp[c] + um * fm[c]);
                }
            }
        }
    }
    PolarField::new(r_grid, theta_grid.clone(), values)
}

/// Relative defect of the norm identity between a field and its channel
/// coefficients.
pub fn parseval_residual(field: &PolarField, coeffs: &ChannelCoefficients) -> f64 {
    let f = field.norm_sq();
    let c = coeffs.norm_sq();
    if f == 0.0 && c == 0.0 {
        0.0
    } else {
        (f - c).abs() / f.max(c)
    }
}

/// Apply the massless operator channel by channel: each `(u_k^+, u_k^-)`
/// pair is mapped through the radial expression of its channel. Refused for
/// massive couplings, where the mass term couples the channels and the
/// decomposition no longer diagonalises the operator.
pub fn apply_operator_channelwise(
    coeffs: &ChannelCoefficients,
    sc: &SectorCoupling,
) -> Result<ChannelCoefficients> {
    if sc.mass() != 0.0 {
        return Err(Error::NonzeroMass(sc.mass()));
    }
    if (sc.omega() - coeffs.omega()).abs() > 1e-12 * coeffs.omega() {
        return Err(Error::GridMismatch(format!(
            "coefficients live on omega={}, coupling has omega={}",
            coeffs.omega(),
            sc.omega()
        )));
    }
    let mut out = Vec::with_capacity(coeffs.channel_count());
    for (k, channel) in coeffs.channels().iter().enumerate() {
        let expr = RadialExpression::for_channel(sc, k)?;
        out.push(expr.apply(channel)?);
    }
    ChannelCoefficients::new(coeffs.omega(), out)
}
