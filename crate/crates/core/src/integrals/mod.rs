//! Generalized first integrals `{F, 𝓗} = Φ𝓗` of the steady Hamiltonian and
//! Darboux polynomials of the rotationally symmetric planar system.

pub mod darboux;
mod exppoly;
mod recursion;
mod seed;

use thiserror::Error;

pub use darboux::{
    bryant_planar_system, bryant_planar_system_formal, darboux_verify, integrating_factor_check, BiPoly,
    IntegratingFactorReport,
};
pub use exppoly::{default_names, j_poly, lift, steady_hamiltonian, ExpPolySum, MomPoly};
pub use recursion::{integral_drift, poisson_bracket, recursion_solve, IntegralCertificate, Seed};
pub use seed::{factorization_seed, Factorization, NoFactorization};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegralError {
    #[error("expected {expected} momenta, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("recursion obstructed at {b} ({reason}): remainder {remainder}")]
    RecursionObstructed { b: String, remainder: String, reason: String },
    #[error("integral has free parameters without numeric values")]
    UnresolvedParameters,
}
