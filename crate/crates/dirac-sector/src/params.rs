//! Problem parameters and the closed-form self-adjointness classification.
//!
//! Everything here is exact arithmetic on the inputs: the angular
//! eigenvalues `lambda_k = (2k+1) pi / (2 omega)`, the channel parameter
//! `delta_k = lambda_k^2 - nu^2`, and the thresholds that decide how many
//! self-adjoint realisations the operator admits and whether a
//! distinguished one can be singled out.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance used to snap `delta` onto the measure-zero buckets
/// (`delta = 0` and `delta = 1/4`). Floating-point inputs cannot hit
/// those values exactly unless they were constructed to.
pub const REGIME_TOL: f64 = 1e-12;

/// Warn when the quantity `(omega/pi) sqrt(nu^2 + 1/4) - 1/2` is this close
/// to an integer: the channel count is then one ulp away from changing.
pub const NEAR_INTEGER_TOL: f64 = 1e-9;

const OMEGA_SLACK: f64 = 1e-9;

/// Opening angle, Coulomb coupling and mass of the sector problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorCoupling {
    omega: f64,
    nu: f64,
    mass: f64,
}

impl SectorCoupling {
    /// Validates `0 < omega <= 2*pi`, `mass >= 0`, `nu` finite.
    pub fn new(omega: f64, nu: f64, mass: f64) -> Result<Self> {
        validate_omega(omega)?;
        if !nu.is_finite() {
            return Err(Error::InvalidCoupling(nu));
        }
        if !mass.is_finite() || mass < 0.0 {
            return Err(Error::InvalidMass(mass));
        }
        Ok(Self { omega, nu, mass })
    }

    /// Massless problem, the case diagonalised by the partial-wave transform.
    pub fn massless(omega: f64, nu: f64) -> Result<Self> {
        Self::new(omega, nu, 0.0)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

pub(crate) fn validate_omega(omega: f64) -> Result<()> {
    if !omega.is_finite() || omega <= 0.0 || omega > std::f64::consts::TAU + OMEGA_SLACK {
        return Err(Error::InvalidOmega(omega));
    }
    Ok(())
}

/// Angular eigenvalue of channel `k`: `(2k+1) pi / (2 omega)`.
///
/// Strictly increasing in `k`, strictly decreasing in `omega`.
pub fn lambda_of(omega: f64, k: usize) -> Result<f64> {
    validate_omega(omega)?;
    Ok((2.0 * k as f64 + 1.0) * std::f64::consts::PI / (2.0 * omega))
}

/// Sharp constant `(pi - omega)^2 / (4 omega^2)` of the sector Hardy
/// inequality; vanishes exactly at the half-plane `omega = pi`.
pub fn hardy_constant(omega: f64) -> Result<f64> {
    validate_omega(omega)?;
    let d = std::f64::consts::PI - omega;
    Ok(d * d / (4.0 * omega * omega))
}

/// Perturbation-theory threshold `(pi - omega)/(2 omega)`.
///
/// Meaningful as a bound on matrix potentials only for `omega < pi`;
/// reported for every angle, with the caller deciding applicability.
pub fn kato_rellich_threshold(omega: f64) -> Result<f64> {
    validate_omega(omega)?;
    Ok((std::f64::consts::PI - omega) / (2.0 * omega))
}

/// Self-adjointness regime of a single radial channel, decided by
/// `delta = lambda_k^2 - nu^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChannelRegime {
    /// `delta > 1/4`: essentially self-adjoint, closure domain `H^1_0`.
    EssentiallySelfAdjointStrict,
    /// `delta = 1/4`: essentially self-adjoint, but the closure domain is
    /// strictly larger than `H^1_0`.
    EssentiallySelfAdjointBorderline,
    /// `0 < delta < 1/4`: one-parameter extension family, power boundary
    /// behaviour `r^{+-sqrt(delta)}`.
    Subcritical,
    /// `delta = 0`: one-parameter family with logarithmic boundary behaviour.
    Critical,
    /// `delta < 0`: one-parameter family with oscillatory boundary behaviour.
    Supercritical,
}

impl ChannelRegime {
    /// Bucket `delta`, snapping to the borderline values within [`REGIME_TOL`].
    pub fn from_delta(delta: f64) -> Self {
        if (delta - 0.25).abs() < REGIME_TOL {
            ChannelRegime::EssentiallySelfAdjointBorderline
        } else if delta.abs() < REGIME_TOL {
            ChannelRegime::Critical
        } else if delta > 0.25 {
            ChannelRegime::EssentiallySelfAdjointStrict
        } else if delta > 0.0 {
            ChannelRegime::Subcritical
        } else {
            ChannelRegime::Supercritical
        }
    }

    /// Channels in either essentially-self-adjoint bucket need (and admit)
    /// no extension data.
    pub fn is_essentially_self_adjoint(&self) -> bool {
        matches!(
            self,
            ChannelRegime::EssentiallySelfAdjointStrict
                | ChannelRegime::EssentiallySelfAdjointBorderline
        )
    }
}

/// Per-channel classification record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelClassification {
    pub k: usize,
    pub lambda: f64,
    pub delta: f64,
    pub regime: ChannelRegime,
}

/// Classify channel `k` of the coupling `sc`.
pub fn classify_channel(sc: &SectorCoupling, k: usize) -> Result<ChannelClassification> {
    let lambda = lambda_of(sc.omega(), k)?;
    let delta = lambda * lambda - sc.nu() * sc.nu();
    Ok(ChannelClassification {
        k,
        lambda,
        delta,
        regime: ChannelRegime::from_delta(delta),
    })
}

/// Whether the minimal operator is already essentially self-adjoint or
/// carries a nontrivial extension family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GlobalCase {
    EssentiallySelfAdjoint,
    ManyExtensions,
}

/// Existence bucket for the distinguished extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DistinguishedKind {
    /// The operator is essentially self-adjoint; the question is void.
    NotApplicable,
    /// Unique extension with power-weight control `|x|^{-a}` up to
    /// `a < 1/2 + sqrt(pi^2/(4 omega^2) - nu^2)`.
    UniqueDistinguished,
    /// Unique extension, but only with the log-corrected weight
    /// `(|x|^a log^2|x|)^{-1}`, `a <= 1/2`.
    UniqueDistinguishedLogWeight,
    /// Infinitely many extensions share the best weight; none is singled out.
    NoDistinguished,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistinguishedReport {
    pub kind: DistinguishedKind,
    /// Supremum of admissible weight exponents `a`, when the question applies.
    pub weight_exponent_sup: Option<f64>,
}

/// Full classification output for one coupling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalClassification {
    pub case: GlobalCase,
    /// Largest non-essentially-self-adjoint channel index; the extension
    /// family is then `U(d+1)`. Absent in the essentially self-adjoint case.
    pub d: Option<usize>,
    /// Real dimension `(d+1)^2` of the unitary family, `0` when trivial.
    pub extension_family_real_dim: usize,
    pub hardy_constant: f64,
    pub kato_rellich_threshold: f64,
    pub kato_rellich_applicable: bool,
    pub distinguished: DistinguishedReport,
    /// Supremum of Sobolev exponents `s` with domain inclusion in `H^s`,
    /// present only when the extension family is nontrivial.
    pub sobolev_exponent_sup: Option<f64>,
    /// Set when the channel-count quantity sits within [`NEAR_INTEGER_TOL`]
    /// of an integer, i.e. the reported `d` is numerically fragile.
    pub near_integer_warning: bool,
    pub channels: Vec<ChannelClassification>,
}

/// Classify the coupling: global case, extension count `d` (by upward scan,
/// never by floating floor), distinguished-extension bucket, and the
/// per-channel table for `k = 0..max_channels`.
pub fn classify(sc: &SectorCoupling, max_channels: usize) -> Result<GlobalClassification> {
    let max_channels = max_channels.max(1);
    let channels: Vec<ChannelClassification> = (0..max_channels)
        .map(|k| classify_channel(sc, k))
        .collect::<Result<_>>()?;

    // delta_k is strictly increasing in k, so the non-ESA channels form a
    // prefix; scan until the first essentially self-adjoint channel.
    let mut count = 0usize;
    loop {
        let ch = classify_channel(sc, count)?;
        if ch.regime.is_essentially_self_adjoint() {
            break;
        }
        count += 1;
    }

    let case = if count == 0 {
        GlobalCase::EssentiallySelfAdjoint
    } else {
        GlobalCase::ManyExtensions
    };
    let d = if count > 0 { Some(count - 1) } else { None };

    let q = (sc.omega() / std::f64::consts::PI) * (sc.nu() * sc.nu() + 0.25).sqrt() - 0.5;
    let near_integer_warning = (q - q.round()).abs() < NEAR_INTEGER_TOL;

    let delta0 = channels[0].delta;
    let distinguished = match case {
        GlobalCase::EssentiallySelfAdjoint => DistinguishedReport {
            kind: DistinguishedKind::NotApplicable,
            weight_exponent_sup: None,
        },
        GlobalCase::ManyExtensions => {
            if delta0.abs() < REGIME_TOL {
                DistinguishedReport {
                    kind: DistinguishedKind::UniqueDistinguishedLogWeight,
                    weight_exponent_sup: Some(0.5),
                }
            } else if delta0 > 0.0 {
                DistinguishedReport {
                    kind: DistinguishedKind::UniqueDistinguished,
                    weight_exponent_sup: Some(0.5 + delta0.sqrt()),
                }
            } else {
                DistinguishedReport {
                    kind: DistinguishedKind::NoDistinguished,
                    weight_exponent_sup: Some(0.5),
                }
            }
        }
    };

    let sobolev_exponent_sup = match case {
        GlobalCase::EssentiallySelfAdjoint => None,
        GlobalCase::ManyExtensions => {
            if delta0 > REGIME_TOL {
                Some(0.5 + delta0.sqrt())
            } else {
                Some(0.5)
            }
        }
    };

    let omega = sc.omega();
    Ok(GlobalClassification {
        case,
        d,
        extension_family_real_dim: count * count,
        hardy_constant: hardy_constant(omega)?,
        kato_rellich_threshold: kato_rellich_threshold(omega)?,
        kato_rellich_applicable: omega < std::f64::consts::PI,
        distinguished,
        sobolev_exponent_sup,
        near_integer_warning,
        channels,
    })
}
