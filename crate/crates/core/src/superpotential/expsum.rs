//! Exponential sums `Σ f_c e^{c·𝐪}` with Laurent coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{fmt_rational, LaurentScalar, Rational};
use crate::orbit::{ExtVector, LorentzForm};

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExpSum {
    terms: BTreeMap<ExtVector, LaurentScalar>,
}

impl ExpSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ExtVector, LaurentScalar)>) -> Self {
        let mut out = Self::new();
        for (c, f) in terms {
            out.add_term(c, f);
        }
        out
    }

    pub fn add_term(&mut self, c: ExtVector, f: LaurentScalar) {
        if f.is_zero() {
            return;
        }
        match self.terms.entry(c) {
            Entry::Vacant(v) => {
                v.insert(f);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &f;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtVector, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn exponents(&self) -> Vec<ExtVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, c: &ExtVector) -> Option<&LaurentScalar> {
        self.terms.get(c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (c, f) in &other.terms {
            out.add_term(c.clone(), f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ExpSum { terms: self.terms.iter().map(|(c, f)| (c.clone(), -f)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (a, fa) in &self.terms {
            for (b, fb) in &other.terms {
                out.add_term(a.add(b), fa * fb);
            }
        }
        out
    }

    /// `∂/∂𝐪_i`.
    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(self.terms.iter().map(|(c, f)| (c.clone(), f.scale(&c.0[i]))))
    }

    /// `J(∇f, ∇g) = Σ J(a, c) f_a g_c e^{(a+c)·𝐪}`.
    pub fn pair(form: &LorentzForm, f: &Self, g: &Self) -> Self {
        let mut out = Self::new();
        for (a, fa) in &f.terms {
            for (c, gc) in &g.terms {
                let j = form.bilinear(a, c).expect("exponent length matches the orbit");
                out.add_term(a.add(c), (fa * gc).scale(&j));
            }
        }
        out
    }

    /// Replaces symbol `index` throughout; `None` if a coefficient cannot be
    /// rewritten exactly.
    pub fn substitute(&self, index: usize, value: &LaurentScalar) -> Option<Self> {
        let mut out = Self::new();
        for (c, f) in &self.terms {
            out.add_term(c.clone(), f.substitute(index, value)?);
        }
        Some(out)
    }

    /// Numeric value at `𝐪 = (q, u)` with symbol values `symbols` (`symbols[0] = s`).
    pub fn eval(&self, qe: &[f64], symbols: &[f64]) -> f64 {
        self.terms.iter().map(|(c, f)| f.eval(symbols) * c.dot_f64(qe).exp()).sum()
    }

    /// Numeric gradient `∇_𝐪 f`.
    pub fn gradient_eval(&self, qe: &[f64], symbols: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; qe.len()];
        for (c, f) in &self.terms {
            let v = f.eval(symbols) * c.dot_f64(qe).exp();
            for (gi, ci) in g.iter_mut().zip(c.to_f64()) {
                *gi += ci * v;
            }
        }
        g
    }

    /// Serializable rows `(exponent entries, coefficient string)`.
    pub fn to_rows(&self) -> Vec<(Vec<String>, String)> {
        self.terms.iter().map(|(c, f)| (c.0.iter().map(fmt_rational).collect(), f.to_string())).collect()
    }

    /// Renders with `q1 … qr, u` as coordinate names (`q, u` when `r = 1`).
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(c, f)| {
                let coeff = if f.len() > 1 { format!("({f})") } else { f.to_string() };
                format!("{coeff}*exp({})", render_exponent(c))
            })
            .collect();
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// `c·𝐪` written out, e.g. `2*q - u` or `1/2*q1 + 3/2*q2 - u`.
pub fn render_exponent(c: &ExtVector) -> String {
    let r = c.len() - 1;
    let mut names: Vec<String> = if r == 1 { vec!["q".into()] } else { (1..=r).map(|i| format!("q{i}")).collect() };
    names.push("u".into());
    let mut out = String::new();
    for (x, name) in c.0.iter().zip(&names) {
        if *x == Rational::from_integer(0.into()) {
            continue;
        }
        let neg = *x < Rational::from_integer(0.into());
        let mag = if neg { -x.clone() } else { x.clone() };
        let body = if mag == Rational::from_integer(1.into()) {
            name.clone()
        } else {
            format!("{}*{}", fmt_rational(&mag), name)
        };
        if out.is_empty() {
            out = if neg { format!("-{body}") } else { body };
        } else {
            out.push_str(if neg { " - " } else { " + " });
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Display for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
