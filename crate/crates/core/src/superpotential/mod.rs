//! Superpotentials `f = Σ f_c e^{c·𝐪}` solving the steady Hamilton–Jacobi
//! equation `J(∇f, ∇f) = e^{𝐝·𝐪}(E + Σ A_w e^{𝐰·𝐪})` with `E = s²`.

mod candidates;
mod expsum;
pub mod hull;
mod prop53;
mod solve;
mod subsystem;

use thiserror::Error;

pub use candidates::{candidate_set, half_lattice_candidates, Candidate};
pub use expsum::{render_exponent, ExpSum};
pub use prop53::{prop53_certificate, EdgeWitness, Prop53Witness};
pub use solve::{
    lemma52_warnings, solve_superpotential, solve_superpotential_with, vertex_law_violations, CertificateKind, Energy,
    Obstruction, SolveOptions, SuperpotentialCertificate,
};
pub use subsystem::{first_order_subsystem, FirstOrderField};

use crate::algebra::LaurentScalar;
use crate::orbit::OrbitData;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuperpotentialError {
    #[error("exponent {exponent} has length {got}, expected {expected}")]
    DimensionMismatch { exponent: String, expected: usize, got: usize },
    #[error("{count} candidates exceed the search limit of {max}")]
    TooManyCandidates { count: usize, max: usize },
    #[error("superpotential equation fails at exponent {b}: residual {mismatch}")]
    InconsistentSystem { b: String, mismatch: String },
    #[error("energy must be positive for this superpotential, got {0}")]
    BadEnergy(f64),
    #[error("free parameters {0:?} need numeric values")]
    UnresolvedParameters(Vec<String>),
}

/// `J(∇f, ∇f) − e^{𝐝·𝐪}(s² + Σ A_w e^{𝐰·𝐪})`; empty iff `f` is a superpotential.
pub fn superpotential_residual(orbit: &OrbitData, f: &ExpSum) -> ExpSum {
    superpotential_residual_with(orbit, f, &LaurentScalar::energy())
}

/// As [`superpotential_residual`] with an explicit energy coefficient
/// (for instance zero for the limiting cases).
pub fn superpotential_residual_with(orbit: &OrbitData, f: &ExpSum, energy: &LaurentScalar) -> ExpSum {
    let form = orbit.lorentz();
    let mut out = ExpSum::pair(&form, f, f);
    let d = orbit.d_ext();
    out.add_term(d.clone(), -energy);
    for w in orbit.weights() {
        out.add_term(d.add(&w.extended()), -LaurentScalar::from_rational(w.a.clone()));
    }
    out
}

/// Checks exponent lengths, then returns `Err(InconsistentSystem)` carrying
/// the first nonzero residual term.
pub fn verify_superpotential(orbit: &OrbitData, f: &ExpSum, energy: &LaurentScalar) -> Result<(), SuperpotentialError> {
    for (c, _) in f.terms() {
        if c.len() != orbit.r() + 1 {
            return Err(SuperpotentialError::DimensionMismatch {
                exponent: c.to_string(),
                expected: orbit.r() + 1,
                got: c.len(),
            });
        }
    }
    let res = superpotential_residual_with(orbit, f, energy);
    let first = res.terms().next().map(|(b, m)| (b.to_string(), m.to_string()));
    match first {
        None => Ok(()),
        Some((b, mismatch)) => Err(SuperpotentialError::InconsistentSystem { b, mismatch }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_laurent;
    use crate::algebra::rat;
    use crate::orbit::ExtVector;

    fn term(c: &[(i64, i64)], f: &str) -> (ExtVector, LaurentScalar) {
        (ExtVector(c.iter().map(|&(n, d)| rat(n, d)).collect()), parse_laurent(f).unwrap())
    }

    #[test]
    fn bryant_residual_is_empty() {
        let f = ExpSum::from_terms([term(&[(2, 1), (-1, 1)], "2*s"), term(&[(1, 1), (-1, 1)], "12/s")]);
        assert!(superpotential_residual(&OrbitData::sphere(4), &f).is_empty());
        let bad = ExpSum::from_terms([term(&[(2, 1), (-1, 1)], "2*s"), term(&[(1, 1), (-1, 1)], "11/s")]);
        let err = verify_superpotential(&OrbitData::sphere(4), &bad, &LaurentScalar::energy()).unwrap_err();
        assert!(matches!(err, SuperpotentialError::InconsistentSystem { .. }));
    }

    #[test]
    fn warped_residual_is_empty() {
        let f = ExpSum::from_terms([
            term(&[(1, 2), (3, 2), (-1, 1)], "s"),
            term(&[(3, 2), (1, 2), (-1, 1)], "s"),
            term(&[(1, 2), (1, 2), (-1, 1)], "4/s"),
        ]);
        assert!(superpotential_residual(&OrbitData::warped(2, 2), &f).is_empty());
    }

    #[test]
    fn circle_family_and_limits() {
        let circle = OrbitData::circle();
        let f = ExpSum::from_terms([term(&[(1, 1), (-1, 1)], "a"), term(&[(0, 1), (-1, 1)], "s^2/a")]);
        assert!(superpotential_residual(&circle, &f).is_empty());
        let zero = LaurentScalar::zero();
        let lim1 = ExpSum::from_terms([term(&[(1, 1), (-1, 1)], "a")]);
        let lim2 = ExpSum::from_terms([term(&[(0, 1), (-1, 1)], "a")]);
        assert!(superpotential_residual_with(&circle, &lim1, &zero).is_empty());
        assert!(superpotential_residual_with(&circle, &lim2, &zero).is_empty());
        assert!(!superpotential_residual(&circle, &lim1).is_empty());
    }

    #[test]
    fn rendering() {
        let f = ExpSum::from_terms([term(&[(2, 1), (-1, 1)], "2*s"), term(&[(1, 1), (-1, 1)], "12/s")]);
        assert_eq!(f.render(), "2*s*exp(2*q - u) + 12*s^-1*exp(q - u)");
    }
}
