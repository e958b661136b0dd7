//! Numerical deficiency-index oracle: integrate the channel system
//! `d u = z u` (`z = +-i`) inward from the far field on the decaying
//! branch and read off the power-law behaviour at the vertex. The channel
//! contributes one deficiency dimension exactly when that solution is
//! square integrable at zero, i.e. when the fitted exponent exceeds `-1/2`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::fit::{fit_exponent, ExponentFit};
use crate::numerics::LogGrid;
use crate::params::{classify_channel, SectorCoupling};
use crate::radial::RadialSample;

/// Outer radius where the frozen-coefficient far field initialises the
/// decaying branch; the discarded growing branch dies off like
/// `e^{-2(R - r)}` on the way in.
pub const R_OUT: f64 = 50.0;

/// Decision margin on the fitted exponent around the integrability
/// threshold `-1/2`.
pub const FIT_MARGIN: f64 = 0.05;

/// Relative tolerance of the adaptive integrator.
pub const SHOOT_RTOL: f64 = 1e-10;

/// Which deficiency equation to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralSide {
    /// `d u = +i u`
    PlusI,
    /// `d u = -i u`
    MinusI,
}

impl SpectralSide {
    fn z(self) -> Complex64 {
        match self {
            SpectralSide::PlusI => Complex64::new(0.0, 1.0),
            SpectralSide::MinusI => Complex64::new(0.0, -1.0),
        }
    }
}

/// Verdict on square integrability at the vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexVerdict {
    /// Exponent safely above `-1/2`: the solution is L^2 at zero and the
    /// channel contributes one deficiency dimension.
    Contributes,
    /// Exponent safely below `-1/2`: no contribution.
    DoesNotContribute,
    /// Exponent within [`FIT_MARGIN`] of `-1/2`: refused rather than guessed.
    Indeterminate,
}

impl IndexVerdict {
    pub fn l2_integrable_at_zero(&self) -> Option<bool> {
        match self {
            IndexVerdict::Contributes => Some(true),
            IndexVerdict::DoesNotContribute => Some(false),
            IndexVerdict::Indeterminate => None,
        }
    }

    pub fn index_contribution(&self) -> Option<u8> {
        self.l2_integrable_at_zero().map(u8::from)
    }
}

/// Outcome of one shooting run.
#[derive(Debug, Clone)]
pub struct ShootingResult {
    /// Decaying-at-infinity solution sampled on the shooting grid.
    pub solution: RadialSample,
    /// Fitted power-law exponent of `|u|` on the vertex window.
    pub fitted_exponent: f64,
    pub fit: ExponentFit,
    pub verdict: IndexVerdict,
    /// Fit window actually used.
    pub window: (f64, f64),
    /// Accepted integrator steps.
    pub steps: usize,
}

/// Analytic deficiency contribution of the channel: `1` iff
/// `delta = lambda_k^2 - nu^2 < 1/4`.
pub fn analytic_index_contribution(sc: &SectorCoupling, k: usize) -> Result<u8> {
    let ch = classify_channel(sc, k)?;
    Ok(u8::from(!ch.regime.is_essentially_self_adjoint()))
}

/// Shoot the deficiency equation of channel `k` on the default vertex grid.
pub fn deficiency_index_numeric(
    sc: &SectorCoupling,
    k: usize,
    side: SpectralSide,
) -> Result<ShootingResult> {
    deficiency_index_on_grid(sc, k, side, 1e-6, 2000)
}

/// Shoot with an explicit inner radius and sample count.
pub fn deficiency_index_on_grid(
    sc: &SectorCoupling,
    k: usize,
    side: SpectralSide,
    r_min: f64,
    samples: usize,
) -> Result<ShootingResult> {
    let ch = classify_channel(sc, k)?;
    let lambda = ch.lambda;
    let nu = sc.nu();
    let z = side.z();

    if !(r_min > 0.0 && r_min < R_OUT / 1e4) {
        return Err(Error::InvalidGrid(format!(
            "shooting needs 0 < r_min << {R_OUT}, got {r_min}"
        )));
    }

    // Far-field initial direction: eigenvector of the frozen coefficient
    // matrix with negative real-part eigenvalue.
    let m = coefficient_matrix(lambda, nu, z, R_OUT);
    let u0 = decaying_direction(m)?;

    let grid = LogGrid::new(r_min, R_OUT, samples)?;
    let mut values = vec![[Complex64::default(); 2]; samples];
    values[samples - 1] = u0;

    // Integrate in s = ln r, inward (decreasing s), landing exactly on the
    // sample nodes along the way.
    let mut s = grid.nodes()[samples - 1].ln();
    let mut u = u0;
    let mut h: f64 = -1e-3;
    let mut steps = 0usize;
    for target_idx in (0..samples - 1).rev() {
        let s_target = grid.nodes()[target_idx].ln();
        loop {
            if !(u[0].is_finite() && u[1].is_finite()) {
                return Err(Error::NonFiniteSolution { r: s.exp() });
            }
            if s <= s_target + 1e-15 {
                break;
            }
            if h.abs() < 1e-12 {
                return Err(Error::Stiffness { r: s.exp() });
            }
            let mut step = h.max(s_target - s);
            // Never step past the next sample node.
            if s + step < s_target {
                step = s_target - s;
            }
            let (u_new, err_est) = rk45_step(lambda, nu, z, s, u, step);
            let scale = norm(u).max(norm(u_new)).max(1e-300);
            let err = err_est / scale;
            if err <= SHOOT_RTOL {
                s += step;
                u = u_new;
                steps += 1;
                let grow = 0.9 * (SHOOT_RTOL / err.max(1e-300)).powf(0.2);
                h = (step * grow.clamp(0.2, 5.0)).max(-0.25).min(-1e-13);
            } else {
                let shrink = 0.9 * (SHOOT_RTOL / err).powf(0.2);
                h = (step * shrink.clamp(0.1, 0.9)).min(-1e-13);
            }
        }
        values[target_idx] = u;
    }

    let solution = RadialSample::new(grid, values)?;
    let window = (10.0 * r_min, 1000.0 * r_min);
    let fit = fit_exponent(&solution, window)?;
    let verdict = if fit.exponent > -0.5 + FIT_MARGIN {
        IndexVerdict::Contributes
    } else if fit.exponent < -0.5 - FIT_MARGIN {
        IndexVerdict::DoesNotContribute
    } else {
        IndexVerdict::Indeterminate
    };

    Ok(ShootingResult {
        solution,
        fitted_exponent: fit.exponent,
        fit,
        verdict,
        window,
        steps,
    })
}

fn coefficient_matrix(lambda: f64, nu: f64, z: Complex64, r: f64) -> [[Complex64; 2]; 2] {
    // u' = M(r) u  for  d u = z u.
    [
        [Complex64::new(lambda / r, 0.0), z - nu / r],
        [nu / r - z, Complex64::new(-lambda / r, 0.0)],
    ]
}

fn decaying_direction(m: [[Complex64; 2]; 2]) -> Result<[Complex64; 2]> {
    // Traceless 2x2: eigenvalues +-sqrt(a^2 + bc).
    let a = m[0][0];
    let b = m[0][1];
    let c = m[1][0];
    let mu = (a * a + b * c).sqrt();
    let mu = if mu.re <= 0.0 { mu } else { -mu };
    if mu.re >= 0.0 {
        return Err(Error::Eigensolver(
            "far-field matrix has no decaying direction".into(),
        ));
    }
    // (a - mu) v1 + b v2 = 0.
    let v = if b.norm() > 1e-300 {
        [b, mu - a]
    } else {
        [mu + a, c]
    };
    let n = norm(v);
    Ok([v[0] / n, v[1] / n])
}

fn norm(u: [Complex64; 2]) -> f64 {
    (u[0].norm_sqr() + u[1].norm_sqr()).sqrt()
}

/// Right-hand side in the log variable: du/ds = r M(r) u.
fn rhs(lambda: f64, nu: f64, z: Complex64, s: f64, u: [Complex64; 2]) -> [Complex64; 2] {
    let r = s.exp();
    let zr = z * r;
    [
        lambda * u[0] + (zr - nu) * u[1],
        (nu - zr) * u[0] - lambda * u[1],
    ]
}

/// One Dormand-Prince 5(4) step; returns the fifth-order solution and an
/// error estimate.
fn rk45_step(
    lambda: f64,
    nu: f64,
    z: Complex64,
    s: f64,
    u: [Complex64; 2],
    h: f64,
) -> ([Complex64; 2], f64) {
    let f = |s: f64, u: [Complex64; 2]| rhs(lambda, nu, z, s, u);
    let add = |u: [Complex64; 2], terms: &[(f64, [Complex64; 2])]| {
        let mut out = u;
        for &(c, k) in terms {
            out[0] += h * c * k[0];
            out[1] += h * c * k[1];
        }
        out
    };

    let k1 = f(s, u);
    let k2 = f(s + h / 5.0, add(u, &[(1.0 / 5.0, k1)]));
    let k3 = f(s + 3.0 * h / 10.0, add(u, &[(3.0 / 40.0, k1), (9.0 / 40.0, k2)]));
    let k4 = f(
        s + 4.0 * h / 5.0,
        add(u, &[(44.0 / 45.0, k1), (-56.0 / 15.0, k2), (32.0 / 9.0, k3)]),
    );
    let k5 = f(
        s + 8.0 * h / 9.0,
        add(
            u,
            &[
                (19372.0 / 6561.0, k1),
                (-25360.0 / 2187.0, k2),
                (64448.0 / 6561.0, k3),
                (-212.0 / 729.0, k4),
            ],
        ),
    );
    let k6 = f(
        s + h,
        add(
            u,
            &[
                (9017.0 / 3168.0, k1),
                (-355.0 / 33.0, k2),
                (46732.0 / 5247.0, k3),
                (49.0 / 176.0, k4),
                (-5103.0 / 18656.0, k5),
            ],
        ),
    );
    let fifth = add(
        u,
        &[
            (35.0 / 384.0, k1),
            (500.0 / 1113.0, k3),
            (125.0 / 192.0, k4),
            (-2187.0 / 6784.0, k5),
            (11.0 / 84.0, k6),
        ],
    );
    let k7 = f(s + h, fifth);
    let fourth = add(
        u,
        &[
            (5179.0 / 57600.0, k1),
            (7571.0 / 16695.0, k3),
            (393.0 / 640.0, k4),
            (-92097.0 / 339200.0, k5),
            (187.0 / 2100.0, k6),
            (1.0 / 40.0, k7),
        ],
    );
    let err = ((fifth[0] - fourth[0]).norm_sqr() + (fifth[1] - fourth[1]).norm_sqr()).sqrt();
    (fifth, err)
}
