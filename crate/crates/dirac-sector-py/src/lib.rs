//! Python bindings for the sector Dirac-Coulomb spectral toolkit.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use dirac_sector::angular::{check_mode_identities, AngularGrid, AngularMode, ModeSign};
use dirac_sector::error::Error;
use dirac_sector::numerics::hardy::{hardy_default_grid, min_hardy_quotient, ChannelSign};
use dirac_sector::numerics::shooting::{
    analytic_index_contribution, deficiency_index_numeric, SpectralSide,
};
use dirac_sector::numerics::LogGrid;
use dirac_sector::radial::{boundary_model, eval_u_alpha, zero_mode_residual, ExtensionMatrix};

fn err(e: Error) -> PyErr {
    match e {
        Error::Eigensolver(_) | Error::Stiffness { .. } | Error::NonFiniteSolution { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_sign(sign: &str) -> PyResult<ChannelSign> {
    match sign {
        "+" => Ok(ChannelSign::Plus),
        "-" => Ok(ChannelSign::Minus),
        _ => Err(PyValueError::new_err(format!("sign must be '+' or '-', got {sign:?}"))),
    }
}

fn parse_mode_sign(sign: &str) -> PyResult<ModeSign> {
    match sign {
        "+" => Ok(ModeSign::Plus),
        "-" => Ok(ModeSign::Minus),
        _ => Err(PyValueError::new_err(format!("sign must be '+' or '-', got {sign:?}"))),
    }
}

/// Angular eigenvalue (2k+1)*pi/(2*omega) of channel k.
#[pyfunction]
fn lambda_of(omega: f64, k: usize) -> PyResult<f64> {
    dirac_sector::lambda_of(omega, k).map_err(err)
}

/// Sharp Hardy constant (pi-omega)^2/(4 omega^2) of the sector.
#[pyfunction]
fn hardy_constant(omega: f64) -> PyResult<f64> {
    dirac_sector::hardy_constant(omega).map_err(err)
}

/// Perturbation threshold (pi-omega)/(2 omega); meaningful for omega < pi.
#[pyfunction]
fn kato_rellich_threshold(omega: f64) -> PyResult<f64> {
    dirac_sector::kato_rellich_threshold(omega).map_err(err)
}

/// Essential-spectrum interval string of every self-adjoint realisation.
#[pyfunction]
fn essential_spectrum(mass: f64) -> String {
    dirac_sector::essential_spectrum_string(mass)
}

/// Per-channel classification record.
#[pyclass(frozen)]
#[derive(Clone)]
struct Channel {
    #[pyo3(get)]
    k: usize,
    #[pyo3(get, name = "lambda_")]
    lambda: f64,
    #[pyo3(get)]
    delta: f64,
    #[pyo3(get)]
    regime: String,
}

#[pymethods]
impl Channel {
    fn __repr__(&self) -> String {
        format!(
            "Channel(k={}, lambda={}, delta={}, regime={})",
            self.k, self.lambda, self.delta, self.regime
        )
    }
}

/// Global classification of one coupling.
#[pyclass(frozen)]
struct Classification {
    #[pyo3(get)]
    case: String,
    #[pyo3(get)]
    d: Option<usize>,
    #[pyo3(get)]
    extension_family_real_dim: usize,
    #[pyo3(get)]
    hardy_constant: f64,
    #[pyo3(get)]
    kato_rellich_threshold: f64,
    #[pyo3(get)]
    kato_rellich_applicable: bool,
    #[pyo3(get)]
    distinguished: String,
    #[pyo3(get)]
    weight_exponent_sup: Option<f64>,
    #[pyo3(get)]
    sobolev_exponent_sup: Option<f64>,
    #[pyo3(get)]
    channels: Vec<Channel>,
}

#[pymethods]
impl Classification {
    fn __repr__(&self) -> String {
        format!(
            "Classification(case={}, d={:?}, distinguished={})",
            self.case, self.d, self.distinguished
        )
    }
}

/// Problem parameters: opening angle, Coulomb coupling, mass.
#[pyclass(frozen)]
struct SectorCoupling {
    inner: dirac_sector::SectorCoupling,
}

#[pymethods]
impl SectorCoupling {
    #[new]
    #[pyo3(signature = (omega, nu, mass = 0.0))]
    fn new(omega: f64, nu: f64, mass: f64) -> PyResult<Self> {
        Ok(Self { inner: dirac_sector::SectorCoupling::new(omega, nu, mass).map_err(err)? })
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega()
    }

    #[getter]
    fn nu(&self) -> f64 {
        self.inner.nu()
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.inner.mass()
    }

    /// Classify the coupling; channels lists k = 0..max_channels-1.
    #[pyo3(signature = (max_channels = 16))]
    fn classify(&self, max_channels: usize) -> PyResult<Classification> {
        let g = dirac_sector::classify(&self.inner, max_channels).map_err(err)?;
        Ok(Classification {
            case: format!("{:?}", g.case),
            d: g.d,
            extension_family_real_dim: g.extension_family_real_dim,
            hardy_constant: g.hardy_constant,
            kato_rellich_threshold: g.kato_rellich_threshold,
            kato_rellich_applicable: g.kato_rellich_applicable,
            distinguished: format!("{:?}", g.distinguished.kind),
            weight_exponent_sup: g.distinguished.weight_exponent_sup,
            sobolev_exponent_sup: g.sobolev_exponent_sup,
            channels: g
                .channels
                .iter()
                .map(|ch| Channel {
                    k: ch.k,
                    lambda: ch.lambda,
                    delta: ch.delta,
                    regime: format!("{:?}", ch.regime),
                })
                .collect(),
        })
    }

    /// Classification of a single channel.
    fn channel(&self, k: usize) -> PyResult<Channel> {
        let ch = dirac_sector::classify_channel(&self.inner, k).map_err(err)?;
        Ok(Channel {
            k: ch.k,
            lambda: ch.lambda,
            delta: ch.delta,
            regime: format!("{:?}", ch.regime),
        })
    }

    /// Extension-family matrix of a non-self-adjoint channel as a 2x2
    /// nested list of complex numbers.
    fn extension_matrix(&self, k: usize) -> PyResult<Vec<Vec<Complex64>>> {
        let model = boundary_model(&self.inner, k).map_err(err)?;
        let m = match model.extension_matrix().map_err(err)? {
            ExtensionMatrix::Subcritical(p) => p.map(|x| Complex64::new(x, 0.0)),
            ExtensionMatrix::Critical(q) => q.map(|x| Complex64::new(x, 0.0)),
            ExtensionMatrix::Supercritical(r) => *r,
        };
        Ok(vec![
            vec![m[(0, 0)], m[(0, 1)]],
            vec![m[(1, 0)], m[(1, 1)]],
        ])
    }

    /// Vertex model function of extension parameter alpha at radius r.
    fn u_alpha(&self, k: usize, alpha: f64, r: f64) -> PyResult<(Complex64, Complex64)> {
        let [a, b] = eval_u_alpha(&self.inner, k, alpha, r).map_err(err)?;
        Ok((a, b))
    }

    /// Sup-norm kernel residual of the vertex model function on a log grid
    /// inside (0, 1).
    #[pyo3(signature = (k, alpha, r_min = 1e-2, r_max = 0.9, n = 8000))]
    fn zero_mode_residual(&self, k: usize, alpha: f64, r_min: f64, r_max: f64, n: usize) -> PyResult<f64> {
        let grid = LogGrid::new(r_min, r_max, n).map_err(err)?;
        zero_mode_residual(&self.inner, k, alpha, &grid).map_err(err)
    }

    /// Deficiency contribution of channel k:
    /// (analytic, numeric or None, fitted exponent, log-correction flag).
    fn deficiency_index(&self, k: usize) -> PyResult<(u8, Option<u8>, f64, bool)> {
        let analytic = analytic_index_contribution(&self.inner, k).map_err(err)?;
        let res = deficiency_index_numeric(&self.inner, k, SpectralSide::MinusI).map_err(err)?;
        Ok((
            analytic,
            res.verdict.index_contribution(),
            res.fitted_exponent,
            res.fit.log_correction,
        ))
    }
}

/// Minimise the discrete channel Hardy quotient:
/// returns (value, analytic_constant, relative_gap).
#[pyfunction]
#[pyo3(signature = (lambda_, sign, r_min = None, r_max = None, n = None))]
fn hardy_quotient(
    lambda_: f64,
    sign: &str,
    r_min: Option<f64>,
    r_max: Option<f64>,
    n: Option<usize>,
) -> PyResult<(f64, f64, f64)> {
    let default = hardy_default_grid();
    let grid = LogGrid::new(
        r_min.unwrap_or(default.r_min()),
        r_max.unwrap_or(default.r_max()),
        n.unwrap_or(default.len()),
    )
    .map_err(err)?;
    let q = min_hardy_quotient(lambda_, parse_sign(sign)?, &grid).map_err(err)?;
    Ok((q.value, q.analytic_constant, q.relative_gap))
}

/// Evaluate an angular eigenmode at theta.
#[pyfunction]
fn mode_eval(omega: f64, k: usize, sign: &str, theta: f64) -> PyResult<(Complex64, Complex64)> {
    let mode = AngularMode::new(omega, k, parse_mode_sign(sign)?).map_err(err)?;
    let [a, b] = mode.eval(theta).map_err(err)?;
    Ok((a, b))
}

/// Residuals (boundary, eigen, map) of the closed-form mode identities.
#[pyfunction]
#[pyo3(signature = (omega, k, sign, nodes = 2001))]
fn mode_residuals(omega: f64, k: usize, sign: &str, nodes: usize) -> PyResult<(f64, f64, f64)> {
    let grid = AngularGrid::uniform(omega, nodes).map_err(err)?;
    let mode = AngularMode::new(omega, k, parse_mode_sign(sign)?).map_err(err)?;
    let res = check_mode_identities(&mode, &grid).map_err(err)?;
    Ok((res.boundary, res.eigen, res.map))
}

#[pymodule]
fn dirac_sector_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<SectorCoupling>()?;
    m.add_class::<Classification>()?;
    m.add_class::<Channel>()?;
    m.add_function(wrap_pyfunction!(lambda_of, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_constant, m)?)?;
    m.add_function(wrap_pyfunction!(kato_rellich_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(essential_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(mode_eval, m)?)?;
    m.add_function(wrap_pyfunction!(mode_residuals, m)?)?;
    Ok(())
}
