//! Numerical laboratory for radial Coulomb energies and fractional Sobolev
//! norms on R^3.
//!
//! The crate computes, for radial profiles, the Coulomb self-energy
//! `D(phi)`, homogeneous Sobolev norms `|phi|_{H^s}` (spectral and
//! Gagliardo routes), weighted Lebesgue norms, and the associated embedding
//! quotients; evaluates every exponent formula in closed form; reproduces
//! the tent-family counterexample sweep; and estimates best constants by
//! derivative-free search over Gaussian mixtures.

pub mod counterexample;
pub mod exponents;
pub mod fixtures;
pub mod functionals;
pub mod optimize;
pub mod profile;
pub mod quad;
pub mod spectral;
pub mod transforms;
pub mod verify;

pub use profile::RadialProfile;
pub use quad::{QuadResult, QuadratureSpec};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature budget exhausted: {0}")]
    QuadratureBudget(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn param(msg: impl Into<String>) -> Error {
        Error::InvalidParameter(msg.into())
    }
}
