//! Sparse multivariate polynomials with exponents stored in lexicographic
//! order (variable 0 most significant).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{fmt_rational, to_f64, LaurentScalar, Rational};

/// Ring operations a polynomial coefficient must support.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Exact quotient when it exists in the coefficient ring.
    fn try_divide(&self, other: &Self) -> Option<Self>;
    /// Human-readable form; `needs_parens` reports whether it is a sum.
    fn render(&self) -> (String, bool);
}

impl Coefficient for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn try_divide(&self, other: &Self) -> Option<Self> {
        (!Zero::is_zero(other)).then(|| self / other)
    }
    fn render(&self) -> (String, bool) {
        (fmt_rational(self), false)
    }
}

impl Coefficient for LaurentScalar {
    fn nil() -> Self {
        LaurentScalar::zero()
    }
    fn unit() -> Self {
        LaurentScalar::one()
    }
    fn vanishes(&self) -> bool {
        LaurentScalar::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_rational(q: &Rational) -> Self {
        LaurentScalar::from_rational(q.clone())
    }
    fn try_divide(&self, other: &Self) -> Option<Self> {
        self.try_div(other)
    }
    fn render(&self) -> (String, bool) {
        (self.to_string(), self.len() > 1)
    }
}

/// Polynomial in `nvars` variables with coefficients in `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Coefficient> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::unit())
    }

    /// The variable `x_index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, C::unit());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Linear form `Σ coeffs[i] x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, C::from_rational(c));
        }
        p
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: C) {
        assert_eq!(exps.len(), self.nvars, "monomial arity mismatch");
        if c.vanishes() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().plus(&c);
                if sum.vanishes() {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::nil)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Homogeneous part of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn leading_term(&self) -> Option<(&Vec<u32>, &C)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negate())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.times(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, cc) in &self.terms {
            out.add_term(e.clone(), cc.times(c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Partial derivative in `x_index`.
    pub fn derivative(&self, index: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[index] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[index] -= 1;
            let k = Rational::from_integer(BigInt::from(e[index]));
            out.add_term(ne, c.times(&C::from_rational(&k)));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Directional derivative `v · ∇self` for a rational vector `v`.
    pub fn directional(&self, v: &[Rational]) -> Self {
        assert_eq!(v.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        for (i, vi) in v.iter().enumerate() {
            if !Zero::is_zero(vi) {
                out = out.add(&self.derivative(i).scale(&C::from_rational(vi)));
            }
        }
        out
    }

    /// Division with remainder by a single polynomial under lex order:
    /// `self = q * divisor + r` with no term of `r` divisible by the leading
    /// monomial of `divisor`. Returns `None` if a leading-coefficient division
    /// is not exact in `C`.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let (lead_e, lead_c) = divisor.leading_term()?;
        let lead_e = lead_e.clone();
        let lead_c = lead_c.clone();
        let mut quotient = Self::zero(self.nvars);
        let mut remainder = Self::zero(self.nvars);
        let mut rest = self.clone();
        while let Some((e, c)) = rest.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lead_e).all(|(a, b)| a >= b) {
                let qe: Vec<u32> = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
                let qc = c.try_divide(&lead_c)?;
                let mono = Self::from_terms(self.nvars, [(qe, qc)]);
                quotient = quotient.add(&mono);
                rest = rest.sub(&mono.mul(divisor));
            } else {
                remainder.add_term(e.clone(), c.clone());
                rest.terms.remove(&e);
            }
        }
        Some((quotient, remainder))
    }

    /// Exact quotient by `divisor`, or `None` if it does not divide.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }

    /// Maps every coefficient.
    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Renders with the given variable names.
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { names[i].to_string() } else { format!("{}^{}", names[i], k) })
                .collect();
            let (cs, sum) = c.render();
            let (negative, mag) = match cs.strip_prefix('-') {
                Some(m) if !sum => (true, m.to_string()),
                _ => (false, cs.clone()),
            };
            let mag = if sum { format!("({mag})") } else { mag };
            let body = if vars.is_empty() {
                mag
            } else if mag == "1" {
                vars.join("*")
            } else {
                format!("{}*{}", mag, vars.join("*"))
            };
            parts.push(if negative { format!("-{body}") } else { body });
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

impl Poly<Rational> {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| to_f64(c) * e.iter().zip(x).map(|(k, xi)| xi.powi(*k as i32)).product::<f64>())
            .sum()
    }

    /// Sign-aware check that all coefficients are non-negative.
    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

impl Poly<LaurentScalar> {
    /// Numeric value at momenta `x` and symbol values `symbols`.
    pub fn eval(&self, x: &[f64], symbols: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.eval(symbols) * e.iter().zip(x).map(|(k, xi)| xi.powi(*k as i32)).product::<f64>())
            .sum()
    }
}

/// All exponent vectors of total degree `k` in `nvars` variables.
pub fn monomials_of_degree(nvars: usize, k: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, k: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == nvars - 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for i in 0..=k {
            prefix.push(i);
            rec(nvars, k - i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, k, &mut Vec::new(), &mut out);
    out
}
