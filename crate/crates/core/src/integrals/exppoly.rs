//! Exponential sums `Σ F_𝐛(𝐩) e^{𝐛·𝐪}` with momentum-polynomial coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{fmt_rational, LaurentScalar, Poly, Rational};
use crate::dynamics::PhasePoint;
use crate::orbit::{ExtVector, OrbitData};
use crate::superpotential::render_exponent;

/// Polynomial in `p_1 … p_r, φ` with Laurent coefficients.
pub type MomPoly = Poly<LaurentScalar>;

/// Lifts a rational polynomial to Laurent coefficients.
pub fn lift(p: &Poly<Rational>) -> MomPoly {
    p.map_coefficients(|q| LaurentScalar::from_rational(q.clone()))
}

/// `J(𝐩)` as a momentum polynomial.
pub fn j_poly(orbit: &OrbitData) -> MomPoly {
    lift(&orbit.lorentz().quadratic_poly())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpPolySum {
    nvars: usize,
    terms: BTreeMap<ExtVector, MomPoly>,
}

impl ExpPolySum {
    /// Empty sum over `nvars = r + 1` momenta.
    pub fn new(nvars: usize) -> Self {
        ExpPolySum { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (ExtVector, MomPoly)>) -> Self {
        let mut out = Self::new(nvars);
        for (b, f) in terms {
            out.add_term(b, f);
        }
        out
    }

    pub fn monomial(b: ExtVector, f: MomPoly) -> Self {
        let n = f.nvars();
        Self::from_terms(n, [(b, f)])
    }

    pub fn add_term(&mut self, b: ExtVector, f: MomPoly) {
        assert_eq!(f.nvars(), self.nvars, "momentum count mismatch");
        assert_eq!(b.len(), self.nvars, "exponent length mismatch");
        if f.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            Entry::Vacant(v) => {
                v.insert(f);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add(&f);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtVector, &MomPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, b: &ExtVector) -> Option<&MomPoly> {
        self.terms.get(b)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, f) in &other.terms {
            out.add_term(b.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ExpPolySum { nvars: self.nvars, terms: self.terms.iter().map(|(b, f)| (b.clone(), f.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new(self.nvars);
        for (a, fa) in &self.terms {
            for (b, fb) in &other.terms {
                out.add_term(a.add(b), fa.mul(fb));
            }
        }
        out
    }

    pub fn scale(&self, c: &LaurentScalar) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(b, f)| (b.clone(), f.scale(c))))
    }

    /// `∂/∂𝐪_i` (`i = r` is `u`).
    pub fn diff_q(&self, i: usize) -> Self {
        let c = |b: &ExtVector| LaurentScalar::from_rational(b.0[i].clone());
        Self::from_terms(self.nvars, self.terms.iter().map(|(b, f)| (b.clone(), f.scale(&c(b)))))
    }

    /// `∂/∂𝐩_i` (`i = r` is `φ`).
    pub fn diff_p(&self, i: usize) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(b, f)| (b.clone(), f.derivative(i))))
    }

    /// Numeric value at a phase point with symbol values (`symbols[0] = s`).
    pub fn eval(&self, pt: &PhasePoint, symbols: &[f64]) -> f64 {
        let mut qe = pt.q.clone();
        qe.push(pt.u);
        let mut mom = pt.p.clone();
        mom.push(pt.phi);
        self.terms.iter().map(|(b, f)| f.eval(&mom, symbols) * b.dot_f64(&qe).exp()).sum()
    }

    /// Serializable rows `(exponent entries, coefficient polynomial)`.
    pub fn to_rows(&self, names: &[&str]) -> Vec<(Vec<String>, String)> {
        self.terms.iter().map(|(b, f)| (b.0.iter().map(fmt_rational).collect(), f.render(names))).collect()
    }

    /// Renders with momentum names (`p, phi` when `r = 1`).
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(b, f)| {
                let body = f.render(names);
                let coeff = if f.terms().count() > 1 { format!("({body})") } else { body };
                if b.is_zero() {
                    coeff
                } else {
                    format!("{coeff}*exp({})", render_exponent(b))
                }
            })
            .collect();
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for ExpPolySum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.render(&refs))
    }
}

/// `p, phi` for one momentum block, `p1 … pr, phi` otherwise.
pub fn default_names(nvars: usize) -> Vec<String> {
    let r = nvars - 1;
    let mut names: Vec<String> = if r == 1 { vec!["p".into()] } else { (1..=r).map(|i| format!("p{i}")).collect() };
    names.push("phi".into());
    names
}

/// Steady Hamiltonian `e^{−½𝐝·𝐪}J(𝐩) − e^{½𝐝·𝐪}(s² + Σ A_w e^{𝐰·𝐪})`.
pub fn steady_hamiltonian(orbit: &OrbitData) -> ExpPolySum {
    let k = orbit.r() + 1;
    let half_d = orbit.d_ext().half();
    let mut h = ExpPolySum::new(k);
    h.add_term(half_d.scale(&Rational::from_integer((-1).into())), j_poly(orbit));
    h.add_term(half_d.clone(), MomPoly::constant(k, -LaurentScalar::energy()));
    for w in orbit.weights() {
        h.add_term(half_d.add(&w.extended()), MomPoly::constant(k, LaurentScalar::from_rational(-w.a.clone())));
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Dynamics, Params};

    #[test]
    fn steady_hamiltonian_matches_numeric() {
        let o = OrbitData::warped(2, 3);
        let h = steady_hamiltonian(&o);
        let dynamics = Dynamics::new(&o, Params::steady(2.5));
        let pt = PhasePoint { q: vec![0.3, -0.1], u: 0.2, p: vec![0.4, -0.7], phi: 1.1 };
        let exact = h.eval(&pt, &[2.5f64.sqrt()]);
        let numeric = dynamics.hamiltonian_steady(&pt).unwrap();
        assert!((exact - numeric).abs() < 1e-12);
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn renders_bryant_hamiltonian() {
        let h = steady_hamiltonian(&OrbitData::sphere(4));
        let text = h.to_string();
        assert!(text.contains("exp(-2*q + u)"), "{text}");
        assert!(text.contains("exp(q - u)"), "{text}");
    }
}
