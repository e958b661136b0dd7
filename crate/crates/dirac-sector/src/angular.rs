//! Eigenbasis of the spin-orbit operator on the angular cross-section.
//!
//! The sector's angular operator `1/2 - i sigma_3 d/dtheta`, restricted by
//! the infinite-mass edge conditions `phi_1(0) = phi_2(0)` and
//! `phi_2(omega) = -e^{i omega} phi_1(omega)`, is diagonalised by the
//! two-component exponential modes built here. All identities they satisfy
//! are closed-form, so the residual checks isolate transcription mistakes
//! rather than discretisation error.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{lambda_of, validate_omega};

/// Sign label of a mode: the `+` modes carry spin-orbit eigenvalue
/// `+lambda_k`, the `-` modes `-lambda_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeSign {
    Plus,
    Minus,
}

impl ModeSign {
    pub fn flip(self) -> Self {
        match self {
            ModeSign::Plus => ModeSign::Minus,
            ModeSign::Minus => ModeSign::Plus,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            ModeSign::Plus => 1.0,
            ModeSign::Minus => -1.0,
        }
    }
}

/// One spinor eigenmode of the angular operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularMode {
    pub k: usize,
    pub sign: ModeSign,
    pub omega: f64,
    /// Cached angular eigenvalue magnitude `lambda_k`.
    pub lambda: f64,
}

impl AngularMode {
    pub fn new(omega: f64, k: usize, sign: ModeSign) -> Result<Self> {
        let lambda = lambda_of(omega, k)?;
        Ok(Self { k, sign, omega, lambda })
    }

    /// Same mode with `lambda` overridden. Deliberately breaks the cached
    /// eigenvalue so residual checks can be exercised as negative controls.
    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// Evaluate the spinor at `theta` in `[0, omega]`.
    ///
    /// Each component has modulus `1/sqrt(2 omega)` at every angle.
    pub fn eval(&self, theta: f64) -> Result<[Complex64; 2]> {
        if !(0.0..=self.omega).contains(&theta) {
            return Err(Error::ThetaOutOfRange { theta, omega: self.omega });
        }
        Ok(self.eval_unchecked(theta))
    }

    pub(crate) fn eval_unchecked(&self, theta: f64) -> [Complex64; 2] {
        let norm = 1.0 / (2.0 * self.omega).sqrt();
        match self.sign {
            ModeSign::Plus => {
                let phase = Complex64::new(0.0, (self.lambda - 0.5) * theta).exp();
                [norm * phase, norm * phase.conj()]
            }
            ModeSign::Minus => {
                let phase = Complex64::new(0.0, (self.lambda + 0.5) * theta).exp();
                let factor = Complex64::new(0.0, -norm);
                [factor * phase.conj(), factor * phase]
            }
        }
    }

    /// Derivative of the spinor in `theta`, from the exact derivative of the
    /// exponentials.
    fn eval_dtheta(&self, theta: f64) -> [Complex64; 2] {
        let v = self.eval_unchecked(theta);
        let rate = match self.sign {
            ModeSign::Plus => self.lambda - 0.5,
            ModeSign::Minus => self.lambda + 0.5,
        };
        match self.sign {
            ModeSign::Plus => [
                Complex64::new(0.0, rate) * v[0],
                Complex64::new(0.0, -rate) * v[1],
            ],
            ModeSign::Minus => [
                Complex64::new(0.0, -rate) * v[0],
                Complex64::new(0.0, rate) * v[1],
            ],
        }
    }

    /// Spin-orbit action `(1/2 - i sigma_3 d/dtheta) f`, applied analytically.
    pub fn spin_orbit_apply(&self, theta: f64) -> [Complex64; 2] {
        let v = self.eval_unchecked(theta);
        let dv = self.eval_dtheta(theta);
        let minus_i = Complex64::new(0.0, -1.0);
        [
            0.5 * v[0] + minus_i * dv[0],
            0.5 * v[1] - minus_i * dv[1],
        ]
    }
}

/// Radial unit-vector action `-i (sigma . e_r)` at angle `theta`.
pub fn radial_matrix_apply(theta: f64, v: [Complex64; 2]) -> [Complex64; 2] {
    // sigma . e_r = [[0, e^{-i theta}], [e^{i theta}, 0]]
    let minus_i = Complex64::new(0.0, -1.0);
    let em = Complex64::new(0.0, -theta).exp();
    let ep = Complex64::new(0.0, theta).exp();
    [minus_i * em * v[1], minus_i * ep * v[0]]
}

/// Quadrature grid on the angular interval `[0, omega]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid {
    omega: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl AngularGrid {
    /// Composite-trapezoid grid on `n >= 2` uniform nodes spanning `[0, omega]`.
    pub fn uniform(omega: f64, n: usize) -> Result<Self> {
        validate_omega(omega)?;
        if n < 2 {
            return Err(Error::Resolution {
                what: "angular grid",
                needed: ">= 2 nodes".into(),
                got: format!("{n}"),
            });
        }
        let h = omega / (n - 1) as f64;
        let nodes = (0..n).map(|i| i as f64 * h).collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Ok(Self { omega, nodes, weights })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Average node spacing.
    pub fn spacing(&self) -> f64 {
        self.omega / (self.nodes.len() - 1) as f64
    }

    /// Require at least `min_per_period` nodes per oscillation period of
    /// `e^{i lambda theta}`.
    pub fn require_resolves(&self, lambda: f64, min_per_period: f64) -> Result<()> {
        let period = std::f64::consts::TAU / lambda.abs().max(1e-300);
        let nodes_per_period = period / self.spacing();
        if nodes_per_period < min_per_period {
            return Err(Error::Resolution {
                what: "angular grid",
                needed: format!("{min_per_period} nodes per period of the highest mode"),
                got: format!("{nodes_per_period:.2}"),
            });
        }
        Ok(())
    }
}

/// Residuals of the closed-form identities a mode must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIdentityResiduals {
    /// `|phi_2(omega) + e^{i omega} phi_1(omega)| + |phi_1(0) - phi_2(0)|`.
    pub boundary: f64,
    /// Sup-norm of the spin-orbit eigen-relation defect over the grid nodes,
    /// measured against the channel eigenvalue derived from `(omega, k)`.
    pub eigen: f64,
    /// Sup-norm of the defect of `-i (sigma . e_r) f^{+-} = +- f^{-+}`.
    pub map: f64,
}

impl ModeIdentityResiduals {
    pub fn max(&self) -> f64 {
        self.boundary.max(self.eigen).max(self.map)
    }
}

/// Evaluate the boundary-condition, eigen-relation and companion-map
/// residuals of `mode` over `grid`.
pub fn check_mode_identities(mode: &AngularMode, grid: &AngularGrid) -> Result<ModeIdentityResiduals> {
    if (grid.omega() - mode.omega).abs() > 1e-12 * mode.omega {
        return Err(Error::GridMismatch(format!(
            "grid spans omega={}, mode has omega={}",
            grid.omega(),
            mode.omega
        )));
    }
    let at0 = mode.eval_unchecked(0.0);
    let at_omega = mode.eval_unchecked(mode.omega);
    let edge_phase = Complex64::new(0.0, mode.omega).exp();
    let boundary = (at_omega[1] + edge_phase * at_omega[0]).norm() + (at0[0] - at0[1]).norm();

    // Eigen-residual against the true eigenvalue of channel k, so a wrong
    // cached lambda shows up instead of cancelling out.
    let true_lambda = lambda_of(mode.omega, mode.k)?;
    let target = mode.sign.as_f64() * true_lambda;
    let companion = AngularMode::new(mode.omega, mode.k, mode.sign.flip())?;

    let mut eigen = 0.0f64;
    let mut map = 0.0f64;
    for &theta in grid.nodes() {
        let v = mode.eval_unchecked(theta);
        let kv = mode.spin_orbit_apply(theta);
        for c in 0..2 {
            eigen = eigen.max((kv[c] - target * v[c]).norm());
        }
        let mapped = radial_matrix_apply(theta, v);
        let expected = companion.eval_unchecked(theta);
        for c in 0..2 {
            map = map.max((mapped[c] - mode.sign.as_f64() * expected[c]).norm());
        }
    }
    Ok(ModeIdentityResiduals { boundary, eigen, map })
}

/// Gram matrix of the first `2K` modes (`f_0^+, f_0^-, ..., f_{K-1}^-`)
/// under the quadrature inner product on `(0, omega)`.
pub fn gram(omega: f64, big_k: usize, grid: &AngularGrid) -> Result<DMatrix<Complex64>> {
    validate_omega(omega)?;
    if big_k == 0 {
        return Err(Error::Resolution {
            what: "gram matrix",
            needed: "K >= 1".into(),
            got: "0".into(),
        });
    }
    let highest = lambda_of(omega, big_k - 1)? + 0.5;
    grid.require_resolves(highest, 8.0)?;

    let modes: Vec<AngularMode> = (0..big_k)
        .flat_map(|k| [ModeSign::Plus, ModeSign::Minus].map(|s| (k, s)))
        .map(|(k, s)| AngularMode::new(omega, k, s))
        .collect::<Result<_>>()?;

    let n = grid.len();
    let mut samples = vec![[Complex64::default(); 2]; modes.len() * n];
    for (m, mode) in modes.iter().enumerate() {
        for (j, &theta) in grid.nodes().iter().enumerate() {
            samples[m * n + j] = mode.eval_unchecked(theta);
        }
    }

    let dim = modes.len();
    let mut g = DMatrix::<Complex64>::zeros(dim, dim);
    for a in 0..dim {
        for b in 0..dim {
            let mut acc = Complex64::default();
            for j in 0..n {
                let fa = samples[a * n + j];
                let fb = samples[b * n + j];
                acc += grid.weights()[j] * (fa[0].conj() * fb[0] + fa[1].conj() * fb[1]);
            }
            g[(a, b)] = acc;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn plus_mode_at_origin_is_equal_components() {
        let mode = AngularMode::new(PI, 0, ModeSign::Plus).unwrap();
        let v = mode.eval(0.0).unwrap();
        let expected = 1.0 / (2.0 * PI).sqrt();
        assert_abs_diff_eq!(v[0].re, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(v[0].im, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1].re, expected, epsilon = 1e-15);
    }

    #[test]
    fn minus_mode_at_origin_is_minus_i_times_ones() {
        let mode = AngularMode::new(PI, 0, ModeSign::Minus).unwrap();
        let v = mode.eval(0.0).unwrap();
        let expected = -1.0 / (2.0 * PI).sqrt();
        for c in 0..2 {
            assert_abs_diff_eq!(v[c].re, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(v[c].im, expected, epsilon = 1e-15);
        }
    }

    #[test]
    fn half_plane_plus_mode_closes_at_far_edge() {
        // lambda_0 = 1/2 on the half-plane, so the phase winds back to (1, 1).
        let mode = AngularMode::new(PI, 0, ModeSign::Plus).unwrap();
        let v = mode.eval(PI).unwrap();
        let expected = 1.0 / (2.0 * PI).sqrt();
        assert_abs_diff_eq!(v[0].re, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(v[0].im, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v[1].re, expected, epsilon = 1e-14);
    }

    #[test]
    fn eval_rejects_angles_outside_sector() {
        let mode = AngularMode::new(PI, 0, ModeSign::Plus).unwrap();
        assert!(mode.eval(-0.1).is_err());
        assert!(mode.eval(PI + 0.1).is_err());
    }

    #[test]
    fn identities_hold_to_roundoff() {
        let grid = AngularGrid::uniform(PI / 2.0, 1001).unwrap();
        let mode = AngularMode::new(PI / 2.0, 0, ModeSign::Plus).unwrap();
        let res = check_mode_identities(&mode, &grid).unwrap();
        assert!(res.max() < 1e-12, "residuals {res:?}");

        let grid = AngularGrid::uniform(2.0 * PI, 1501).unwrap();
        let mode = AngularMode::new(2.0 * PI, 3, ModeSign::Minus).unwrap();
        let res = check_mode_identities(&mode, &grid).unwrap();
        assert!(res.max() < 1e-12, "residuals {res:?}");
    }

    #[test]
    fn wrong_eigenvalue_is_caught_by_eigen_residual() {
        let omega = PI;
        let grid = AngularGrid::uniform(omega, 501).unwrap();
        let true_lambda = lambda_of(omega, 0).unwrap();
        let mode = AngularMode::new(omega, 0, ModeSign::Plus)
            .unwrap()
            .with_lambda(true_lambda + 0.1);
        let res = check_mode_identities(&mode, &grid).unwrap();
        let sup = 1.0 / (2.0 * omega).sqrt();
        assert!(res.eigen >= 0.1 * sup * 0.999, "eigen residual {}", res.eigen);
    }

    #[test]
    fn gram_matrix_is_identity() {
        let grid = AngularGrid::uniform(PI, 2001).unwrap();
        let g = gram(PI, 1, &grid).unwrap();
        let mut dev = 0.0f64;
        for a in 0..2 {
            for b in 0..2 {
                let target = if a == b { 1.0 } else { 0.0 };
                dev = dev.max((g[(a, b)] - target).norm());
            }
        }
        assert!(dev < 1e-10, "gram deviation {dev}");
        assert_abs_diff_eq!(g[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g[(1, 1)].re, 1.0, epsilon = 1e-12);

        let grid = AngularGrid::uniform(2.0 * PI, 8001).unwrap();
        let g = gram(2.0 * PI, 4, &grid).unwrap();
        let mut dev = 0.0f64;
        for a in 0..8 {
            for b in 0..8 {
                let target = if a == b { 1.0 } else { 0.0 };
                dev = dev.max((g[(a, b)] - target).norm());
            }
        }
        assert!(dev < 1e-8, "gram deviation {dev}");
    }

    #[test]
    fn gram_rejects_underresolved_grid() {
        let grid = AngularGrid::uniform(2.0 * PI, 12).unwrap();
        assert!(matches!(gram(2.0 * PI, 6, &grid), Err(Error::Resolution { .. })));
    }

    #[test]
    fn boundary_phase_winding_is_an_odd_multiple_of_pi() {
        for &omega in &[PI / 2.0, PI, 1.234, 2.0 * PI] {
            for k in 0..6 {
                let lambda = lambda_of(omega, k).unwrap();
                let winding = 2.0 * lambda * omega / PI;
                let nearest_odd = 2.0 * ((winding - 1.0) / 2.0).round() + 1.0;
                assert!((winding - nearest_odd).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn radial_map_squares_to_minus_identity(
            omega in 0.3f64..std::f64::consts::TAU,
            k in 0usize..6,
            frac in 0.0f64..1.0,
        ) {
            for sign in [ModeSign::Plus, ModeSign::Minus] {
                let mode = AngularMode::new(omega, k, sign).unwrap();
                let theta = frac * omega;
                let v = mode.eval_unchecked(theta);
                let twice = radial_matrix_apply(theta, radial_matrix_apply(theta, v));
                for c in 0..2 {
                    prop_assert!((twice[c] + v[c]).norm() < 1e-13);
                }
            }
        }

        #[test]
        fn component_modulus_is_constant(
            omega in 0.3f64..std::f64::consts::TAU,
            k in 0usize..6,
            frac in 0.0f64..1.0,
        ) {
            for sign in [ModeSign::Plus, ModeSign::Minus] {
                let mode = AngularMode::new(omega, k, sign).unwrap();
                let v = mode.eval_unchecked(frac * omega);
                let expected = 1.0 / (2.0 * omega).sqrt();
                prop_assert!((v[0].norm() - expected).abs() < 1e-13);
                prop_assert!((v[1].norm() - expected).abs() < 1e-13);
            }
        }
    }
}
