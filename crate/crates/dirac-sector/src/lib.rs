//! Numerical spectral toolkit for the two-dimensional Dirac operator with a
//! Coulomb vertex singularity on an infinite sector under infinite-mass
//! boundary conditions.
//!
//! The crate classifies self-adjointness regimes channel by channel,
//! enumerates the unitary extension families, builds the vertex boundary
//! models, and verifies the classification numerically: sharp Hardy
//! constants by Rayleigh-quotient minimisation, deficiency indices by an
//! ODE shooting oracle, and the partial-wave decomposition by quadrature.
//!
//! The essential spectrum of every self-adjoint realisation is the set
//! `(-inf, -m] u [m, +inf)`; together with the eigenvalue-filling statement
//! for the massive gap this is an operator-theoretic fact with no
//! finite-dimensional certificate, so it is reported as text rather than
//! computed.

pub mod angular;
pub mod csv_io;
pub mod error;
pub mod numerics;
pub mod params;
pub mod partial_wave;
pub mod radial;
pub mod report;

pub use error::{Error, Result};
pub use params::{
    classify, classify_channel, hardy_constant, kato_rellich_threshold, lambda_of,
    ChannelClassification, ChannelRegime, DistinguishedKind, DistinguishedReport, GlobalCase,
    GlobalClassification, SectorCoupling,
};

/// Essential-spectrum interval string for mass `m`.
pub fn essential_spectrum_string(mass: f64) -> String {
    format!("(-inf,{}] U [{},+inf)", -mass, mass)
}
