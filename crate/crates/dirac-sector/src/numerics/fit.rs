//! Power-law exponent fits on radial samples, with a detector for
//! logarithmic corrections.

use crate::error::{Error, Result};
use crate::radial::RadialSample;

/// Minimum number of in-window nodes for a trustworthy fit.
pub const MIN_FIT_NODES: usize = 20;

/// Result of fitting `log |u(r)|` against `log r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    /// Least-squares slope, i.e. the local power-law exponent.
    pub exponent: f64,
    pub intercept: f64,
    /// Coefficient of determination of the pure power-law model.
    pub r_squared: f64,
    /// Set when adding a `ln |ln r|` term explains most of the residual,
    /// the signature of `u ~ log r` behaviour near the origin.
    pub log_correction: bool,
}

/// Fit the power-law exponent of `|u|` over `r` in `[window.0, window.1]`.
pub fn fit_exponent(sample: &RadialSample, window: (f64, f64)) -> Result<ExponentFit> {
    let (lo, hi) = window;
    if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || hi <= lo {
        return Err(Error::DegenerateFitWindow(format!("window [{lo}, {hi}]")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, &r) in sample.grid().nodes().iter().enumerate() {
        if r < lo || r > hi {
            continue;
        }
        let [u1, u2] = sample.values()[i];
        let norm = (u1.norm_sqr() + u2.norm_sqr()).sqrt();
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::DegenerateFitWindow(format!(
                "sample vanishes or is non-finite at r={r:.3e}"
            )));
        }
        xs.push(r.ln());
        ys.push(norm.ln());
    }
    if xs.len() < MIN_FIT_NODES {
        return Err(Error::DegenerateFitWindow(format!(
            "only {} nodes in window, need {MIN_FIT_NODES}",
            xs.len()
        )));
    }

    let (slope, intercept, rss_linear, tss) = linear_fit(&xs, &ys);
    let r_squared = if tss > 0.0 { 1.0 - rss_linear / tss } else { 1.0 };

    // Augmented model a + b s + c ln(-s), valid while the window sits below
    // r = 1 (s < 0); pure log-r behaviour gives c = 1 with b = 0.
    let log_correction = if xs.iter().all(|&s| s < -1e-9) {
        let zs: Vec<f64> = xs.iter().map(|&s| (-s).ln()).collect();
        let (c, rss_aug) = augmented_fit(&xs, &zs, &ys, rss_linear);
        c.abs() > 0.3 && rss_aug < 0.5 * rss_linear
    } else {
        false
    };

    Ok(ExponentFit {
        exponent: slope,
        intercept,
        r_squared,
        log_correction,
    })
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut tss = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        tss += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    (slope, intercept, rss, tss)
}

/// Least squares for `y = a + b x + c z`; returns `(c, rss)`.
fn augmented_fit(xs: &[f64], zs: &[f64], ys: &[f64], fallback_rss: f64) -> (f64, f64) {
    let n = xs.len() as f64;
    // Normal equations for the 3-parameter model.
    let sum = |it: &mut dyn Iterator<Item = f64>| it.sum::<f64>();
    let sx = sum(&mut xs.iter().copied());
    let sz = sum(&mut zs.iter().copied());
    let sy = sum(&mut ys.iter().copied());
    let sxx = sum(&mut xs.iter().map(|&x| x * x));
    let szz = sum(&mut zs.iter().map(|&z| z * z));
    let sxz = sum(&mut xs.iter().zip(zs).map(|(&x, &z)| x * z));
    let sxy = sum(&mut xs.iter().zip(ys).map(|(&x, &y)| x * y));
    let szy = sum(&mut zs.iter().zip(ys).map(|(&z, &y)| z * y));

    let m = nalgebra::Matrix3::new(n, sx, sz, sx, sxx, sxz, sz, sxz, szz);
    let rhs = nalgebra::Vector3::new(sy, sxy, szy);
    let Some(sol) = m.lu().solve(&rhs) else {
        return (0.0, fallback_rss);
    };
    let (a, b, c) = (sol[0], sol[1], sol[2]);
    let rss: f64 = xs
        .iter()
        .zip(zs)
        .zip(ys)
        .map(|((&x, &z), &y)| {
            let e = y - (a + b * x + c * z);
            e * e
        })
        .sum();
    (c, rss)
}
