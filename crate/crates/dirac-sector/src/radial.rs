//! Radial channel machinery: the half-line differential expression, the
//! boundary matrices of the extension families, the smooth cutoff, and the
//! vertex model functions that parameterise each self-adjoint extension.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{derivative, LogGrid};
use crate::params::{classify_channel, ChannelRegime, SectorCoupling};

/// The two-by-two radial differential expression of channel `k`:
/// diagonal Coulomb term `nu/r`, off-diagonal first-order part with
/// angular weight `lambda/r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialExpression {
    pub nu: f64,
    pub lambda: f64,
}

impl RadialExpression {
    pub fn new(nu: f64, lambda: f64) -> Self {
        Self { nu, lambda }
    }

    pub fn for_channel(sc: &SectorCoupling, k: usize) -> Result<Self> {
        let ch = classify_channel(sc, k)?;
        Ok(Self::new(sc.nu(), ch.lambda))
    }

    /// Apply the expression to a sampled function with the log-grid stencils.
    pub fn apply(&self, u: &RadialSample) -> Result<RadialSample> {
        let grid = u.grid().clone();
        let (u1, u2): (Vec<Complex64>, Vec<Complex64>) =
            u.values().iter().map(|&[a, b]| (a, b)).unzip();
        let du1 = derivative(&grid, &u1)?;
        let du2 = derivative(&grid, &u2)?;
        let values = grid
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let coulomb = self.nu / r;
                let weight = self.lambda / r;
                [
                    coulomb * u1[i] - du2[i] - weight * u2[i],
                    du1[i] - weight * u1[i] + coulomb * u2[i],
                ]
            })
            .collect();
        RadialSample::new(grid, values)
    }
}

/// Two-component complex function sampled on a log grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSample {
    grid: LogGrid,
    values: Vec<[Complex64; 2]>,
}

impl RadialSample {
    pub fn new(grid: LogGrid, values: Vec<[Complex64; 2]>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values on a {}-node grid",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: LogGrid, f: impl Fn(f64) -> [Complex64; 2]) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: LogGrid) -> Self {
        let n = grid.len();
        Self { grid, values: vec![[Complex64::default(); 2]; n] }
    }

    pub fn grid(&self) -> &LogGrid {
        &self.grid
    }

    pub fn values(&self) -> &[[Complex64; 2]] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [[Complex64; 2]] {
        &mut self.values
    }

    /// Pointwise euclidean norm of the pair at node `i`.
    pub fn norm_at(&self, i: usize) -> f64 {
        let [a, b] = self.values[i];
        (a.norm_sqr() + b.norm_sqr()).sqrt()
    }

    /// Sup of the pointwise norm over interior nodes (one-sided stencil
    /// nodes at both ends excluded).
    pub fn interior_sup_norm(&self) -> f64 {
        let n = self.values.len();
        (1..n - 1).map(|i| self.norm_at(i)).fold(0.0, f64::max)
    }
}

/// Smooth cutoff: identically one below `r = 1`, identically zero above
/// `r = 2`, nonincreasing, built from the standard `exp(-1/t)` mollifier so
/// the support bounds are exact.
pub fn cutoff_chi(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let rise = (-1.0 / (2.0 - r)).exp();
        let fall = (-1.0 / (r - 1.0)).exp();
        rise / (rise + fall)
    }
}

/// Extension-family matrix for one non-essentially-self-adjoint channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtensionMatrix {
    /// Invertible matrix pairing the `r^{+-sqrt(delta)}` branches.
    Subcritical(Matrix2<f64>),
    /// Nilpotent matrix (`Q^2 = 0`) generating the `log r` branch.
    Critical(Matrix2<f64>),
    /// Invertible complex matrix pairing the oscillatory branches.
    Supercritical(Matrix2<Complex64>),
}

impl ExtensionMatrix {
    pub fn as_complex(&self) -> Matrix2<Complex64> {
        match self {
            ExtensionMatrix::Subcritical(m) | ExtensionMatrix::Critical(m) => {
                m.map(|x| Complex64::new(x, 0.0))
            }
            ExtensionMatrix::Supercritical(m) => *m,
        }
    }
}

/// Boundary-model data of one channel: the extension matrix (when the
/// channel admits extensions), the reduced weight `lambda_tilde`, and the
/// constant intertwiners that map the full expression onto the off-diagonal
/// one with weight `lambda_tilde`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryModel {
    pub k: usize,
    pub lambda: f64,
    pub delta: f64,
    pub regime: ChannelRegime,
    /// `sqrt(delta)` for `delta >= 0`, `i sqrt(-delta)` otherwise.
    pub lambda_tilde: Complex64,
    pub m1: Matrix2<Complex64>,
    pub m2: Matrix2<Complex64>,
    extension: Option<ExtensionMatrix>,
}

impl BoundaryModel {
    /// Root describing the vertex behaviour: `sqrt(delta)`, `0`, or
    /// `i sqrt(-delta)` depending on the regime.
    pub fn root(&self) -> Complex64 {
        self.lambda_tilde
    }

    /// The regime's extension matrix, or a regime error in the essentially
    /// self-adjoint buckets where none exists.
    pub fn extension_matrix(&self) -> Result<&ExtensionMatrix> {
        self.extension.as_ref().ok_or(Error::EssentiallySelfAdjointChannel {
            k: self.k,
            delta: self.delta,
        })
    }
}

/// Build the boundary model of channel `k`. Intertwiners and
/// `lambda_tilde` are produced in every regime; the extension matrix only
/// where the channel is not essentially self-adjoint.
pub fn boundary_model(sc: &SectorCoupling, k: usize) -> Result<BoundaryModel> {
    let ch = classify_channel(sc, k)?;
    let nu = sc.nu();
    let lambda = ch.lambda;
    let delta = ch.delta;

    let lambda_tilde = if matches!(ch.regime, ChannelRegime::Critical) {
        Complex64::new(0.0, 0.0)
    } else if delta >= 0.0 {
        Complex64::new(delta.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-delta).sqrt())
    };

    let sum = Complex64::new(lambda, 0.0) + lambda_tilde;
    let cnu = Complex64::new(nu, 0.0);
    let m1 = Matrix2::new(cnu, sum, sum, cnu);
    let m2 = Matrix2::new(-cnu, sum, sum, -cnu);

    let extension = match ch.regime {
        ChannelRegime::EssentiallySelfAdjointStrict
        | ChannelRegime::EssentiallySelfAdjointBorderline => None,
        ChannelRegime::Subcritical => {
            let root = delta.sqrt();
            let pref = 1.0 / (2.0 * root * (-lambda - root));
            let p = pref
                * Matrix2::new(
                    -lambda - root,
                    nu,
                    -nu,
                    lambda + root,
                );
            Some(ExtensionMatrix::Subcritical(p))
        }
        ChannelRegime::Critical => {
            let q = Matrix2::new(lambda, -nu, nu, -lambda);
            Some(ExtensionMatrix::Critical(q))
        }
        ChannelRegime::Supercritical => {
            let mu = Complex64::new(0.0, (-delta).sqrt());
            let pref = (2.0 * mu * (Complex64::new(-lambda, 0.0) - mu)).inv();
            let r = Matrix2::new(
                Complex64::new(-lambda, 0.0) - mu,
                cnu,
                -cnu,
                Complex64::new(lambda, 0.0) + mu,
            );
            Some(ExtensionMatrix::Supercritical(r.map(|x| pref * x)))
        }
    };

    Ok(BoundaryModel {
        k,
        lambda,
        delta,
        regime: ch.regime,
        lambda_tilde,
        m1,
        m2,
        extension,
    })
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || !(0.0..std::f64::consts::PI).contains(&alpha) {
        return Err(Error::InvalidAlpha(alpha));
    }
    Ok(())
}

/// Vertex model function of extension parameter `alpha` at radius `r`,
/// including the cutoff factor; exactly zero for `r >= 2`.
pub fn eval_u_alpha(sc: &SectorCoupling, k: usize, alpha: f64, r: f64) -> Result<[Complex64; 2]> {
    validate_alpha(alpha)?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidGrid(format!("radius must be positive, got {r}")));
    }
    let model = boundary_model(sc, k)?;
    let matrix = model.extension_matrix()?;
    let chi = cutoff_chi(r);
    if chi == 0.0 {
        return Ok([Complex64::default(); 2]);
    }
    let (c, s) = (alpha.cos(), alpha.sin());
    let v = match matrix {
        ExtensionMatrix::Subcritical(p) => {
            let root = model.delta.sqrt();
            let col = nalgebra::Vector2::new(c * r.powf(root), s * r.powf(-root));
            (p * col).map(|x| Complex64::new(x, 0.0))
        }
        ExtensionMatrix::Critical(q) => {
            let dir = nalgebra::Vector2::new(c, s);
            let v = (q * r.ln() + Matrix2::identity()) * dir;
            v.map(|x| Complex64::new(x, 0.0))
        }
        ExtensionMatrix::Supercritical(rm) => {
            let mu = (-model.delta).sqrt();
            // r^{i mu} = exp(i mu ln r)
            let osc = Complex64::new(0.0, mu * r.ln()).exp();
            let col = nalgebra::Vector2::new(c * osc, s * osc.conj());
            rm * col
        }
    };
    Ok([chi * v[0], chi * v[1]])
}

/// Sample a vertex model function on a log grid.
pub fn u_alpha_sample(sc: &SectorCoupling, k: usize, alpha: f64, grid: &LogGrid) -> Result<RadialSample> {
    let values = grid
        .nodes()
        .iter()
        .map(|&r| eval_u_alpha(sc, k, alpha, r))
        .collect::<Result<Vec<_>>>()?;
    RadialSample::new(grid.clone(), values)
}

/// Sup-norm of the expression applied to the vertex model function over the
/// interior nodes of a grid contained in `(0, 1)`, where the cutoff is
/// identically one and the model function is an exact kernel element. The
/// value is pure stencil error and shrinks at second order.
pub fn zero_mode_residual(sc: &SectorCoupling, k: usize, alpha: f64, grid: &LogGrid) -> Result<f64> {
    if grid.r_max() >= 1.0 {
        return Err(Error::InvalidGrid(format!(
            "zero-mode residual needs a grid inside (0, 1), got r_max = {}",
            grid.r_max()
        )));
    }
    let u = u_alpha_sample(sc, k, alpha, grid)?;
    let expr = RadialExpression::for_channel(sc, k)?;
    let residual = expr.apply(&u)?;
    Ok(residual.interior_sup_norm())
}

/// The reduced off-diagonal expression with weight `lambda_tilde` that the
/// intertwiners map the full expression onto.
fn apply_reduced(lambda_tilde: Complex64, u: &RadialSample) -> Result<RadialSample> {
    let grid = u.grid().clone();
    let (u1, u2): (Vec<Complex64>, Vec<Complex64>) =
        u.values().iter().map(|&[a, b]| (a, b)).unzip();
    let du1 = derivative(&grid, &u1)?;
    let du2 = derivative(&grid, &u2)?;
    let values = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let w = lambda_tilde / r;
            [du2[i] - w * u2[i], -du1[i] - w * u1[i]]
        })
        .collect();
    RadialSample::new(grid, values)
}

fn matrix_apply(m: &Matrix2<Complex64>, u: &RadialSample) -> RadialSample {
    let values = u
        .values()
        .iter()
        .map(|&[a, b]| {
            [
                m[(0, 0)] * a + m[(0, 1)] * b,
                m[(1, 0)] * a + m[(1, 1)] * b,
            ]
        })
        .collect();
    RadialSample { grid: u.grid().clone(), values }
}

/// Sup-norm of `M1 (d u) - d_tilde (M2 u)` over interior nodes. The identity
/// holds at the level of the discrete operators, so the result is pure
/// roundoff whenever the matrices are correct.
pub fn intertwining_residual(sc: &SectorCoupling, k: usize, u: &RadialSample) -> Result<f64> {
    let model = boundary_model(sc, k)?;
    let expr = RadialExpression::for_channel(sc, k)?;
    let lhs = matrix_apply(&model.m1, &expr.apply(u)?);
    let rhs = apply_reduced(model.lambda_tilde, &matrix_apply(&model.m2, u))?;
    let n = lhs.values().len();
    let mut sup = 0.0f64;
    for i in 1..n - 1 {
        let [a1, b1] = lhs.values()[i];
        let [a2, b2] = rhs.values()[i];
        sup = sup.max(((a1 - a2).norm_sqr() + (b1 - b2).norm_sqr()).sqrt());
    }
    Ok(sup)
}

/// Extension parameter selecting the distinguished realisation of a
/// non-essentially-self-adjoint channel, when one exists: the value in
/// `[0, pi)` whose model function carries only the least singular branch.
/// `None` in the supercritical regime, where every extension shares the
/// same vertex weight and none is distinguished.
pub fn distinguished_alpha(regime: ChannelRegime, nu: f64) -> Option<f64> {
    match regime {
        ChannelRegime::Subcritical => Some(0.0),
        ChannelRegime::Critical => {
            // -sign(nu) * pi/4, folded into [0, pi).
            if nu >= 0.0 {
                Some(3.0 * std::f64::consts::FRAC_PI_4)
            } else {
                Some(std::f64::consts::FRAC_PI_4)
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn mat_abs_sup(m: &Matrix2<Complex64>) -> f64 {
        m.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn cutoff_has_exact_support_and_is_monotone() {
        assert_eq!(cutoff_chi(0.5), 1.0);
        assert_eq!(cutoff_chi(1.0), 1.0);
        assert_eq!(cutoff_chi(2.0), 0.0);
        assert_eq!(cutoff_chi(5.0), 0.0);
        let mut prev = 1.0;
        for i in 0..=100 {
            let r = 1.0 + i as f64 / 100.0;
            let v = cutoff_chi(r);
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev + 1e-15);
            prev = v;
        }
        // C^1 across the support boundaries: one-sided slopes vanish.
        for r in [1.0 + 1e-8, 2.0 - 1e-8] {
            let h = 1e-8;
            let slope = (cutoff_chi(r + h) - cutoff_chi(r - h)) / (2.0 * h);
            assert!(slope.abs() < 1e-3, "slope at {r}: {slope}");
        }
    }

    #[test]
    fn subcritical_matrix_matches_direct_substitution() {
        // omega = 2 pi, nu = 0: lambda = 1/4, sqrt(delta) = 1/4, so the
        // off-diagonals vanish and the prefactor gives +-2 on the diagonal.
        let sc = SectorCoupling::massless(2.0 * PI, 0.0).unwrap();
        let model = boundary_model(&sc, 0).unwrap();
        let ExtensionMatrix::Subcritical(p) = model.extension_matrix().unwrap() else {
            panic!("expected subcritical matrix");
        };
        assert_abs_diff_eq!(p[(0, 0)], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p[(0, 1)], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p[(1, 0)], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p[(1, 1)], -2.0, epsilon = 1e-14);
        let det = p[(0, 0)] * p[(1, 1)] - p[(0, 1)] * p[(1, 0)];
        assert!(det.abs() > 1e-12 * p.norm_squared());
    }

    #[test]
    fn critical_matrix_is_nilpotent() {
        let sc = SectorCoupling::massless(PI, 0.5).unwrap();
        let model = boundary_model(&sc, 0).unwrap();
        let ExtensionMatrix::Critical(q) = model.extension_matrix().unwrap() else {
            panic!("expected critical matrix");
        };
        assert_abs_diff_eq!(q[(0, 0)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(q[(0, 1)], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(q[(1, 0)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(q[(1, 1)], -0.5, epsilon = 1e-15);
        let q2 = q * q;
        assert!(q2.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn supercritical_matrix_is_invertible() {
        let sc = SectorCoupling::massless(PI, 2.0).unwrap();
        let model = boundary_model(&sc, 0).unwrap();
        let ExtensionMatrix::Supercritical(r) = model.extension_matrix().unwrap() else {
            panic!("expected supercritical matrix");
        };
        let det = r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)];
        // det = 1/(2 i mu (-lambda - i mu)) with mu = sqrt(15)/2... here
        // mu^2 = 4 - 1/4, |denominator| = 2 mu sqrt(lambda^2 + mu^2) = sqrt(60).
        assert_abs_diff_eq!(det.norm(), 1.0 / 60.0f64.sqrt(), epsilon = 1e-12);
        let sup = mat_abs_sup(r);
        assert!(det.norm() > 1e-12 * sup * sup);
    }

    #[test]
    fn extension_matrix_refused_in_self_adjoint_channel() {
        let sc = SectorCoupling::massless(PI / 2.0, 0.0).unwrap();
        let model = boundary_model(&sc, 0).unwrap();
        assert!(matches!(
            model.extension_matrix(),
            Err(Error::EssentiallySelfAdjointChannel { k: 0, .. })
        ));
        // Intertwiners exist in every regime.
        assert!(model.m1.iter().all(|x| x.is_finite()));
        assert_abs_diff_eq!(model.lambda_tilde.re, (1.0f64 - 0.0).sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn expression_annihilates_exact_kernel_elements() {
        // nu = 0, lambda = 1: (r, 0) and (0, 1/r) solve d u = 0 exactly.
        let expr = RadialExpression::new(0.0, 1.0);
        let grid = LogGrid::new(0.1, 10.0, 400).unwrap();
        let u = RadialSample::from_fn(grid.clone(), |r| {
            [Complex64::new(r, 0.0), Complex64::default()]
        });
        let res = expr.apply(&u).unwrap();
        assert!(res.interior_sup_norm() < 2e-4, "{}", res.interior_sup_norm());

        // The 1/r^2 scale of the second element amplifies the stencil
        // constant near the inner edge.
        let u = RadialSample::from_fn(grid, |r| {
            [Complex64::default(), Complex64::new(1.0 / r, 0.0)]
        });
        let res = expr.apply(&u).unwrap();
        assert!(res.interior_sup_norm() < 5e-3, "{}", res.interior_sup_norm());
    }

    #[test]
    fn model_function_values_at_unit_radius() {
        // Subcritical: P (1, 0)^T = first column = (2, 0).
        let sc = SectorCoupling::massless(2.0 * PI, 0.0).unwrap();
        let v = eval_u_alpha(&sc, 0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(v[0].re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v[1].norm(), 0.0, epsilon = 1e-14);

        // Critical at r = 1: log term drops, identity remains.
        let sc = SectorCoupling::massless(PI, 0.5).unwrap();
        let v = eval_u_alpha(&sc, 0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(v[0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v[1].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn model_function_vanishes_beyond_cutoff() {
        let sc = SectorCoupling::massless(2.0 * PI, 0.0).unwrap();
        for r in [2.0, 2.5, 10.0] {
            let v = eval_u_alpha(&sc, 0, 0.0, r).unwrap();
            assert_eq!(v[0], Complex64::default());
            assert_eq!(v[1], Complex64::default());
        }
    }

    #[test]
    fn model_function_requires_extension_regime() {
        let sc = SectorCoupling::massless(PI / 2.0, 0.0).unwrap();
        assert!(eval_u_alpha(&sc, 0, 0.0, 0.5).is_err());
    }

    #[test]
    fn zero_mode_residuals_shrink_at_second_order() {
        let cases = [
            (2.0 * PI, 0.0, 0.0),
            (2.0 * PI, 0.0, PI / 2.0),
            (PI, 2.0, 0.3),
        ];
        for (omega, nu, alpha) in cases {
            let sc = SectorCoupling::massless(omega, nu).unwrap();
            let r1 = zero_mode_residual(&sc, 0, alpha, &LogGrid::new(1e-2, 0.9, 1000).unwrap()).unwrap();
            let r2 = zero_mode_residual(&sc, 0, alpha, &LogGrid::new(1e-2, 0.9, 2000).unwrap()).unwrap();
            let order = (r1 / r2).log2();
            assert!(order > 1.8, "omega={omega} nu={nu} alpha={alpha}: order {order}");
        }
    }

    #[test]
    fn critical_zero_mode_is_stencil_exact() {
        // Log-linear components are differentiated exactly by the stencils.
        let sc = SectorCoupling::massless(PI, 0.5).unwrap();
        for alpha in [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
            let res = zero_mode_residual(&sc, 0, alpha, &LogGrid::new(1e-2, 0.9, 2000).unwrap()).unwrap();
            assert!(res < 1e-9, "alpha={alpha}: {res}");
        }
    }

    #[test]
    fn zero_mode_residual_rejects_grids_touching_cutoff() {
        let sc = SectorCoupling::massless(2.0 * PI, 0.0).unwrap();
        assert!(zero_mode_residual(&sc, 0, 0.0, &LogGrid::new(0.1, 1.5, 100).unwrap()).is_err());
    }

    #[test]
    fn intertwining_identity_holds_on_smooth_data() {
        let grid = LogGrid::new(1e-3, 1e2, 3000).unwrap();
        let bump = |r: f64| {
            let s = r.ln();
            (-(s * s) / 2.0).exp()
        };
        let u = RadialSample::from_fn(grid, |r| {
            [Complex64::new(bump(r), 0.0), Complex64::new(0.3 * bump(r), 0.1 * bump(r))]
        });
        for (omega, nu) in [(PI / 2.0, 0.5), (PI, 0.5), (PI, 2.0), (2.0 * PI, 0.0)] {
            let sc = SectorCoupling::massless(omega, nu).unwrap();
            let res = intertwining_residual(&sc, 0, &u).unwrap();
            assert!(res < 1e-8, "omega={omega} nu={nu}: {res}");
        }
    }

    #[test]
    fn critical_intertwiners_annihilate_each_other() {
        let sc = SectorCoupling::massless(PI, 0.5).unwrap();
        let model = boundary_model(&sc, 0).unwrap();
        let m12 = model.m1 * model.m2;
        let m21 = model.m2 * model.m1;
        assert!(mat_abs_sup(&m12) < 1e-14);
        assert!(mat_abs_sup(&m21) < 1e-14);

        // M1 + M2 = 2 lambda antidiag(1, 1), exactly.
        let sum = model.m1 + model.m2;
        assert_eq!(sum[(0, 0)], Complex64::default());
        assert_eq!(sum[(1, 1)], Complex64::default());
        assert_abs_diff_eq!(sum[(0, 1)].re, 2.0 * model.lambda, epsilon = 1e-16);
        assert_abs_diff_eq!(sum[(1, 0)].re, 2.0 * model.lambda, epsilon = 1e-16);
    }

    #[test]
    fn distinguished_parameter_by_regime() {
        assert_eq!(distinguished_alpha(ChannelRegime::Subcritical, 0.4), Some(0.0));
        assert_eq!(
            distinguished_alpha(ChannelRegime::Critical, 0.5),
            Some(3.0 * PI / 4.0)
        );
        assert_eq!(
            distinguished_alpha(ChannelRegime::Critical, -0.5),
            Some(PI / 4.0)
        );
        assert_eq!(distinguished_alpha(ChannelRegime::Supercritical, 2.0), None);
        assert_eq!(
            distinguished_alpha(ChannelRegime::EssentiallySelfAdjointStrict, 0.0),
            None
        );
    }

    proptest! {
        #[test]
        fn model_function_is_linear_in_the_direction_vector(
            alpha in 0.0f64..3.141,
            log_r in -6.0f64..0.6,
        ) {
            let r = log_r.exp();
            let sc = SectorCoupling::massless(2.0 * PI, 0.1).unwrap();
            let v = eval_u_alpha(&sc, 0, alpha, r).unwrap();
            let v0 = eval_u_alpha(&sc, 0, 0.0, r).unwrap();
            let v90 = eval_u_alpha(&sc, 0, std::f64::consts::FRAC_PI_2, r).unwrap();
            let (c, s) = (alpha.cos(), alpha.sin());
            for i in 0..2 {
                let combo = c * v0[i] + s * v90[i];
                prop_assert!((v[i] - combo).norm() < 1e-12);
            }
        }
    }
}
