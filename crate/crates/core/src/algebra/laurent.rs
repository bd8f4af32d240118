//! Laurent coefficients over ℚ in the energy parameter `s` (`E = s^2`).
//!
//! Besides `s`, a scalar may carry free family parameters (`a`, `b`, ...)
//! introduced by the superpotential solver, and square roots of squarefree
//! integers. Each monomial is `sqrt(m) * s^k0 * a^k1 * ...` with `m`
//! squarefree, which keeps the representation canonical: two scalars are
//! equal exactly when their term maps are equal.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_rational, rational_sqrt, squarefree_split, to_f64, Rational};

/// Index of the energy parameter `s` among the symbols.
pub const S: usize = 0;

pub const PARAM_NAMES: [&str; 7] = ["s", "a", "b", "c", "g", "k", "m"];

/// Display name of symbol `index` (`0` is `s`).
pub fn symbol_name(index: usize) -> String {
    PARAM_NAMES.get(index).map(|s| s.to_string()).unwrap_or_else(|| format!("a{index}"))
}

/// Inverse of [`symbol_name`].
pub fn symbol_index(name: &str) -> Option<usize> {
    if let Some(i) = PARAM_NAMES.iter().position(|n| *n == name) {
        return Some(i);
    }
    name.strip_prefix('a')?.parse::<usize>().ok().filter(|i| *i >= PARAM_NAMES.len())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: Vec<i32>,
    radical: u64,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { exps: Vec::new(), radical: 1 }
    }

    pub fn symbol(index: usize, power: i32) -> Self {
        let mut exps = vec![0; index + 1];
        exps[index] = power;
        Monomial { exps, radical: 1 }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.exps.last() == Some(&0) {
            self.exps.pop();
        }
        self
    }

    pub fn exponent(&self, index: usize) -> i32 {
        self.exps.get(index).copied().unwrap_or(0)
    }

    pub fn radical(&self) -> u64 {
        self.radical
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty() && self.radical == 1
    }

    /// Product of two monomials together with the integer factor pulled out
    /// of the radicals (`sqrt(6) * sqrt(10) = 2 * sqrt(15)`).
    fn times(&self, other: &Monomial) -> (u64, Monomial) {
        let len = self.exps.len().max(other.exps.len());
        let exps = (0..len).map(|i| self.exponent(i) + other.exponent(i)).collect();
        let g = self.radical.gcd(&other.radical);
        let radical = (self.radical / g) * (other.radical / g);
        (g, Monomial { exps, radical }.trimmed())
    }

    /// `m^-1 = sqrt(r)^-1 * ... = (1/r) * sqrt(r) * ...`; returns the factor `r`.
    fn inverse(&self) -> (u64, Monomial) {
        (self.radical, Monomial { exps: self.exps.iter().map(|e| -e).collect(), radical: self.radical })
    }

    fn eval(&self, values: &[f64]) -> f64 {
        let mut v = (self.radical as f64).sqrt();
        for (i, e) in self.exps.iter().enumerate() {
            if *e != 0 {
                v *= values.get(i).copied().unwrap_or(f64::NAN).powi(*e);
            }
        }
        v
    }

    fn symbols(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().enumerate().filter(|(_, e)| **e != 0).map(|(i, _)| i)
    }

    fn without(&self, index: usize) -> Monomial {
        let mut m = self.clone();
        if index < m.exps.len() {
            m.exps[index] = 0;
        }
        m.trimmed()
    }

    fn fmt_factors(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.radical != 1 {
            out.push(format!("sqrt({})", self.radical));
        }
        for (i, e) in self.exps.iter().enumerate() {
            match *e {
                0 => {}
                1 => out.push(symbol_name(i)),
                e => out.push(format!("{}^{}", symbol_name(i), e)),
            }
        }
        out
    }
}

/// Finite sum `Σ c_m m` with rational `c_m ≠ 0` over [`Monomial`]s.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut out = Self::zero();
        out.push(Monomial::one(), q);
        out
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn monomial(coeff: Rational, m: Monomial) -> Self {
        let mut out = Self::zero();
        out.push(m, coeff);
        out
    }

    /// `coeff * s^power`.
    pub fn s_power(coeff: Rational, power: i32) -> Self {
        Self::monomial(coeff, Monomial::symbol(S, power))
    }

    /// `E = s^2`.
    pub fn energy() -> Self {
        Self::s_power(Rational::one(), 2)
    }

    /// The free parameter with symbol index `index` (≥ 1).
    pub fn param(index: usize) -> Self {
        Self::monomial(Rational::one(), Monomial::symbol(index, 1))
    }

    /// `sqrt(n)` for a positive integer, reduced to `k * sqrt(squarefree)`.
    pub fn sqrt_int(n: &BigInt) -> Option<Self> {
        let (square, free) = squarefree_split(n)?;
        Some(Self::monomial(Rational::from_integer(square), Monomial { exps: Vec::new(), radical: free }))
    }

    fn push(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value when the scalar has no symbols or radicals.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Coefficient of `s^power` when the scalar only involves `s` and rationals.
    pub fn coefficient_of_s(&self, power: i32) -> Rational {
        self.terms
            .iter()
            .filter(|(m, _)| m.exponent(S) == power && m.without(S).is_one())
            .map(|(_, c)| c.clone())
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Symbols (other than `s`) occurring in the scalar.
    pub fn params(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.symbols().filter(|i| *i != S).collect::<Vec<_>>()).collect()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        LaurentScalar { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    fn mul_monomial(&self, coeff: &Rational, m: &Monomial) -> Self {
        let mut out = Self::zero();
        for (mm, c) in &self.terms {
            let (factor, prod) = mm.times(m);
            out.push(prod, c * coeff * Rational::from_integer(BigInt::from(factor)));
        }
        out
    }

    /// Integer power; negative powers require a monomial.
    pub fn pow(&self, k: i32) -> Option<Self> {
        if k >= 0 {
            let mut out = Self::one();
            for _ in 0..k {
                out = &out * self;
            }
            return Some(out);
        }
        let inv = Self::one().try_div(self)?;
        inv.pow(-k)
    }

    /// Exact quotient. Division is supported by monomials only; returns
    /// `None` otherwise (or when dividing by zero).
    pub fn try_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if !other.is_monomial() {
            return None;
        }
        let (m, c) = other.terms.iter().next().unwrap();
        let (r, inv) = m.inverse();
        let coeff = Rational::one() / (c * Rational::from_integer(BigInt::from(r)));
        Some(self.mul_monomial(&coeff, &inv))
    }

    /// Positive square root of a monomial with a positive rational
    /// coefficient and even exponents; `None` if it would need a fourth root,
    /// a negative radicand or is not a monomial.
    pub fn try_sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if !self.is_monomial() {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        if m.radical != 1 || m.exps.iter().any(|e| e % 2 != 0) || !c.is_positive() {
            return None;
        }
        let half = Monomial { exps: m.exps.iter().map(|e| e / 2).collect(), radical: 1 };
        if let Some(root) = rational_sqrt(c) {
            return Some(Self::monomial(root, half));
        }
        // sqrt(p/q) = sqrt(p q) / q
        let pq = c.numer() * c.denom();
        let (square, free) = squarefree_split(&pq)?;
        let coeff = Rational::new(square, c.denom().clone());
        Some(Self::monomial(coeff, Monomial { radical: free, ..half }))
    }

    /// Replaces the symbol `index` by a monomial value.
    pub fn substitute(&self, index: usize, value: &Self) -> Option<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(index);
            let base = Self::monomial(c.clone(), m.without(index));
            out = &out + &(&base * &value.pow(e)?);
        }
        Some(out)
    }

    /// Groups terms by the power of symbol `index`.
    pub fn split_by_symbol(&self, index: usize) -> BTreeMap<i32, LaurentScalar> {
        let mut out: BTreeMap<i32, LaurentScalar> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exponent(index)).or_default().push(m.without(index), c.clone());
        }
        out
    }

    /// Numeric value for symbol values `values[i]` (`values[0]` is `s`).
    pub fn eval(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| to_f64(c) * m.eval(values)).sum()
    }

    /// Numeric value at `s`; `None` if free parameters remain.
    pub fn eval_s(&self, s: f64) -> Option<f64> {
        self.params().is_empty().then(|| self.eval(&[s]))
    }

    /// Sign of the dominant term as `s → ∞` (highest power of `s`, ties
    /// broken by monomial order).
    pub fn leading_sign(&self) -> i32 {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| a.exponent(S).cmp(&b.exponent(S)).then_with(|| a.cmp(b)))
            .map(|(_, c)| if c.is_positive() { 1 } else { -1 })
            .unwrap_or(0)
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let factors = m.fmt_factors();
            let negative = c.is_negative();
            let magnitude = c.abs();
            let body = if factors.is_empty() {
                fmt_rational(&magnitude)
            } else if magnitude.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", fmt_rational(&magnitude), factors.join("*"))
            };
            match (first, negative) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.push(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.push(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (m, c) in &rhs.terms {
            out = &out + &self.mul_monomial(c, m);
        }
        out
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        self.scale(&-Rational::one())
    }
}

impl Add for LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: LaurentScalar) -> LaurentScalar {
        &self + &rhs
    }
}

impl Sub for LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: LaurentScalar) -> LaurentScalar {
        &self - &rhs
    }
}

impl Mul for LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: LaurentScalar) -> LaurentScalar {
        &self * &rhs
    }
}

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl From<Rational> for LaurentScalar {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn s(c: i64, k: i32) -> LaurentScalar {
        LaurentScalar::s_power(rat(c, 1), k)
    }

    #[test]
    fn display_matches_serialized_form() {
        assert_eq!(s(2, 1).to_string(), "2*s");
        assert_eq!(s(12, -1).to_string(), "12*s^-1");
        assert_eq!((&s(2, 1) + &s(12, -1)).to_string(), "2*s + 12*s^-1");
        assert_eq!((-&s(1, 2)).to_string(), "-s^2");
        assert_eq!(LaurentScalar::from_rational(rat(-3, 2)).to_string(), "-3/2");
    }

    #[test]
    fn zero_terms_are_dropped() {
        let x = &s(2, 1) - &s(2, 1);
        assert!(x.is_zero());
        let y = &(&s(1, 1) + &s(1, 0)) * &(&s(1, 1) - &s(1, 0));
        assert_eq!(y, &s(1, 2) - &s(1, 0));
    }

    #[test]
    fn monomial_division_and_roots() {
        let e = LaurentScalar::energy();
        let q = e.try_div(&s(2, 1)).unwrap();
        assert_eq!(q, LaurentScalar::s_power(rat(1, 2), 1));
        assert_eq!(s(4, 2).try_sqrt(), Some(s(2, 1)));
        assert!(s(4, 1).try_sqrt().is_none());
        assert!((&s(1, 2) + &s(1, 0)).try_div(&(&s(1, 1) + &s(1, 0))).is_none());
    }

    #[test]
    fn radicals_are_canonical() {
        let r2 = LaurentScalar::sqrt_int(&BigInt::from(2)).unwrap();
        let r8 = LaurentScalar::sqrt_int(&BigInt::from(8)).unwrap();
        assert_eq!(r8, r2.scale(&rat(2, 1)));
        assert_eq!(&r2 * &r2, LaurentScalar::from_int(2));
        let r3 = LaurentScalar::sqrt_int(&BigInt::from(3)).unwrap();
        let r6 = LaurentScalar::sqrt_int(&BigInt::from(6)).unwrap();
        assert_eq!(&r2 * &r3, r6);
        assert_eq!(LaurentScalar::from_rational(rat(1, 2)).try_sqrt().unwrap(), r2.scale(&rat(1, 2)));
        let inv = LaurentScalar::one().try_div(&r2).unwrap();
        assert_eq!(&inv * &r2, LaurentScalar::one());
    }

    #[test]
    fn substitution_of_parameters() {
        let a = LaurentScalar::param(1);
        let x = &s(16, 0).try_div(&(&a * &a)).unwrap() - &LaurentScalar::energy();
        let split = x.split_by_symbol(1);
        assert_eq!(split.keys().copied().collect::<Vec<_>>(), vec![-2, 0]);
        let val = s(4, -1);
        assert!(x.substitute(1, &val).unwrap().is_zero());
    }

    #[test]
    fn evaluation_and_sign() {
        let x = &s(2, 1) + &s(12, -1);
        assert!((x.eval_s(2.0).unwrap() - 10.0).abs() < 1e-15);
        assert_eq!((-&x).leading_sign(), -1);
        assert!(LaurentScalar::param(1).eval_s(1.0).is_none());
    }
}
