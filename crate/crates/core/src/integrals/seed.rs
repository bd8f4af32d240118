//! Seed levels from a factorization `J = (𝐜·∇J) θ` for single-block orbits.

use std::fmt;

use num_integer::Roots;

use super::exppoly::{j_poly, MomPoly};
use super::recursion::Seed;
use crate::algebra::{int, rat, LaurentScalar, Poly, Rational};
use crate::orbit::{ExtVector, OrbitData};

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub c: ExtVector,
    pub theta: MomPoly,
}

impl Factorization {
    /// Seed with `ψ_𝐜 = psi` and `F_𝐜 = θ ψ`.
    pub fn seed(&self, psi: MomPoly) -> Seed {
        Seed { c: self.c.clone(), f_c: self.theta.mul(&psi), psi_c: psi }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoFactorization {
    /// More than one isotropy block.
    NotSingleBlock(usize),
    /// `√n` is irrational.
    Irrational(u32),
}

impl fmt::Display for NoFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NoFactorization::NotSingleBlock(r) => write!(f, "needs a single block, got r = {r}"),
            NoFactorization::Irrational(n) => write!(f, "irrational: sqrt({n}) is not rational"),
        }
    }
}

pub fn factorization_seed(orbit: &OrbitData) -> Result<Factorization, NoFactorization> {
    if orbit.r() != 1 {
        return Err(NoFactorization::NotSingleBlock(orbit.r()));
    }
    let n = orbit.n();
    let root = n.sqrt();
    if root * root != n {
        return Err(NoFactorization::Irrational(n));
    }
    let (c, theta): (Vec<Rational>, Vec<Rational>) = if n == 1 {
        (vec![int(0), int(1)], vec![int(1), int(1)])
    } else {
        let sq = root as i64;
        let n = n as i64;
        (vec![rat(-(n + sq), 2), int(1)], vec![rat(-1, sq), rat(-(sq - 1), 2)])
    };
    let c = ExtVector(c);
    let theta: MomPoly = Poly::linear(&theta).map_coefficients(|q: &Rational| LaurentScalar::from_rational(q.clone()));
    let j = j_poly(orbit);
    assert_eq!(j, j.directional(&c.0).mul(&theta), "factorization identity");
    Ok(Factorization { c, theta })
}
