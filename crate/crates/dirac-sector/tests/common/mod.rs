//! Shared test support: an independent two-dimensional finite-difference
//! oracle for the sector operator, plus band-limited field fixtures.
#![allow(dead_code)] // each test binary uses its own subset
//!
//! The oracle never touches the partial-wave transform: derivatives are
//! taken directly on the `(r, theta)` tensor grid and assembled through the
//! cartesian chain rule, so agreement with the channelwise route is a
//! genuine cross-check.

use num_complex::Complex64;

use dirac_sector::angular::AngularGrid;
use dirac_sector::numerics::{integration_weights, LogGrid};
use dirac_sector::partial_wave::{reconstruct, ChannelCoefficients, PolarField};
use dirac_sector::radial::RadialSample;

/// Gaussian bump in the log radius, effectively supported on a few decades.
pub fn log_bump(r: f64) -> f64 {
    let s = r.ln();
    (-(s * s) / 0.5).exp()
}

/// Deterministic band-limited fixture: random complex channel profiles under
/// a shared log-Gaussian envelope, reconstructed onto the tensor grid.
pub fn band_limited_field(
    omega: f64,
    channels: usize,
    r_grid: &LogGrid,
    theta_grid: &AngularGrid,
    seed: u64,
) -> (PolarField, ChannelCoefficients) {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(0x2545f4914f6cdd1d);
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state as f64 / u64::MAX as f64) * 2.0 - 1.0
    };
    let mut samples = Vec::new();
    for _ in 0..channels {
        let (a, b, c, d) = (next(), next(), next(), next());
        samples.push(RadialSample::from_fn(r_grid.clone(), |r| {
            let g = log_bump(r);
            [Complex64::new(a * g, b * g), Complex64::new(c * g, d * g)]
        }));
    }
    let coeffs = ChannelCoefficients::new(omega, samples).expect("fixture channels share a grid");
    let field = reconstruct(&coeffs, theta_grid).expect("fixture reconstruction");
    (field, coeffs)
}

/// Radial derivative of every theta column (centred second order in the log
/// variable, one-sided at the ends).
fn d_dr(field: &PolarField) -> Vec<[Complex64; 2]> {
    let nr = field.r_grid().len();
    let nt = field.theta_grid().len();
    let h = field.r_grid().log_step();
    let r = field.r_grid().nodes();
    let mut out = vec![[Complex64::default(); 2]; nr * nt];
    for it in 0..nt {
        for c in 0..2 {
            let v = |ir: usize| field.at(ir, it)[c];
            out[it][c] = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h * r[0]);
            out[(nr - 1) * nt + it][c] =
                (3.0 * v(nr - 1) - 4.0 * v(nr - 2) + v(nr - 3)) / (2.0 * h * r[nr - 1]);
            for ir in 1..nr - 1 {
                out[ir * nt + it][c] = (v(ir + 1) - v(ir - 1)) / (2.0 * h * r[ir]);
            }
        }
    }
    out
}

/// Angular derivative of every radius row (centred second order, one-sided
/// at the edges).
fn d_dtheta(field: &PolarField) -> Vec<[Complex64; 2]> {
    let nr = field.r_grid().len();
    let nt = field.theta_grid().len();
    let h = field.theta_grid().spacing();
    let mut out = vec![[Complex64::default(); 2]; nr * nt];
    for ir in 0..nr {
        for c in 0..2 {
            let v = |it: usize| field.at(ir, it)[c];
            out[ir * nt][c] = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
            out[ir * nt + nt - 1][c] = (3.0 * v(nt - 1) - 4.0 * v(nt - 2) + v(nt - 3)) / (2.0 * h);
            for it in 1..nt - 1 {
                out[ir * nt + it][c] = (v(it + 1) - v(it - 1)) / (2.0 * h);
            }
        }
    }
    out
}

/// `sigma . grad psi` assembled through the cartesian chain rule:
/// `d/dx1 = cos(theta) d/dr - sin(theta)/r d/dtheta`, and the second row
/// analogously; the Pauli structure collapses to
/// `((d1 - i d2) psi_2, (d1 + i d2) psi_1)`.
pub fn sigma_grad_2d(field: &PolarField) -> Vec<[Complex64; 2]> {
    let dr = d_dr(field);
    let dt = d_dtheta(field);
    let nr = field.r_grid().len();
    let nt = field.theta_grid().len();
    let mut out = vec![[Complex64::default(); 2]; nr * nt];
    let i = Complex64::new(0.0, 1.0);
    for (ir, &r) in field.r_grid().nodes().iter().enumerate() {
        for (it, &theta) in field.theta_grid().nodes().iter().enumerate() {
            let idx = ir * nt + it;
            let (sin, cos) = theta.sin_cos();
            let d1 = |c: usize| cos * dr[idx][c] - sin / r * dt[idx][c];
            let d2 = |c: usize| sin * dr[idx][c] + cos / r * dt[idx][c];
            out[idx][0] = d1(1) - i * d2(1);
            out[idx][1] = d1(0) + i * d2(0);
        }
    }
    out
}

/// Direct application of the massless operator `-i sigma . grad + nu/r` on
/// the tensor grid.
pub fn apply_operator_2d(field: &PolarField, nu: f64) -> Vec<[Complex64; 2]> {
    let grad = sigma_grad_2d(field);
    let nr = field.r_grid().len();
    let nt = field.theta_grid().len();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut out = vec![[Complex64::default(); 2]; nr * nt];
    for (ir, &r) in field.r_grid().nodes().iter().enumerate() {
        for it in 0..nt {
            let idx = ir * nt + it;
            let psi = field.at(ir, it);
            for c in 0..2 {
                out[idx][c] = minus_i * grad[idx][c] + nu / r * psi[c];
            }
        }
    }
    out
}

/// 2D quadrature of `|sigma . grad psi|^2` over the sector.
pub fn sigma_grad_energy_2d(field: &PolarField) -> f64 {
    let grad = sigma_grad_2d(field);
    let r_weights = integration_weights(field.r_grid());
    let t_weights = field.theta_grid().weights();
    let nt = field.theta_grid().len();
    let mut acc = 0.0;
    for (ir, &wr) in r_weights.iter().enumerate() {
        let jac = field.r_grid().nodes()[ir];
        for (it, &wt) in t_weights.iter().enumerate() {
            let g = grad[ir * nt + it];
            acc += wr * jac * wt * (g[0].norm_sqr() + g[1].norm_sqr());
        }
    }
    acc
}

/// Sup norm over interior nodes (margin nodes dropped on every side) of the
/// difference of two tensor-grid sample sets.
pub fn interior_sup_diff(
    a: &[[Complex64; 2]],
    b: &[[Complex64; 2]],
    nr: usize,
    nt: usize,
    margin: usize,
) -> f64 {
    let mut sup = 0.0f64;
    for ir in margin..nr - margin {
        for it in margin..nt - margin {
            let idx = ir * nt + it;
            for c in 0..2 {
                sup = sup.max((a[idx][c] - b[idx][c]).norm());
            }
        }
    }
    sup
}

/// Sup norm over interior nodes of one tensor-grid sample set.
pub fn interior_sup(values: &[[Complex64; 2]], nr: usize, nt: usize, margin: usize) -> f64 {
    let mut sup = 0.0f64;
    for ir in margin..nr - margin {
        for it in margin..nt - margin {
            let idx = ir * nt + it;
            for c in 0..2 {
                sup = sup.max(values[idx][c].norm());
            }
        }
    }
    sup
}
