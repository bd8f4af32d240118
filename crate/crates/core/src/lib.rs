//! Hamiltonian formulation of cohomogeneity-one gradient Ricci solitons with
//! multiplicity-free isotropy: exact superpotentials and first integrals,
//! closed-form steady solitons, and constrained numerical flows.

// comparisons like `!(x < tol)` are written to also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod dynamics;
pub mod flows;
pub mod integrals;
pub mod orbit;
pub mod superpotential;

pub use algebra::{LaurentScalar, Poly, Rational};
pub use dynamics::{CurveSample, Dynamics, DynamicsError, Params, PhasePoint, VelocityPoint};
pub use flows::{CatalogId, CurveParams, FlowError, SolutionCurve, Trajectory};
pub use integrals::{ExpPolySum, IntegralCertificate, IntegralError, MomPoly, Seed};
pub use orbit::{ExtVector, LorentzForm, OrbitData, OrbitError, OrbitSpec};
pub use superpotential::{ExpSum, SuperpotentialCertificate, SuperpotentialError};
