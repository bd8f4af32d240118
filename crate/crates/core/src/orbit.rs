//! Principal-orbit data and the Lorentzian momentum form `J`.
//!
//! Extended vectors carry `r + 1` entries; the last slot is the `u`/`φ` slot.
//! The distinguished vector is `𝐝 = (d_1, …, d_r, −2)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::linear::{signature, Matrix};
use crate::algebra::{fmt_rational, int, parse_rational, rat, to_f64, Poly, Rational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error("duplicate weight vector {w} (entry {index})")]
    DuplicateWeight { index: usize, w: String },
    #[error("weight entry {index} has zero coefficient")]
    ZeroCoefficient { index: usize },
    #[error("dimension d_{index} = {value} must be a positive integer")]
    BadDimension { index: usize, value: i64 },
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot parse `{text}` as an exact rational (entry {index})")]
    BadRational { index: usize, text: String },
    #[error("orbit must have at least one summand")]
    Empty,
}

/// Vector of `r + 1` exact rationals; the last slot is the `u`/`φ` slot.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtVector(pub Vec<Rational>);

impl ExtVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        ExtVector(entries)
    }

    pub fn zero(len: usize) -> Self {
        ExtVector(vec![Rational::zero(); len])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        ExtVector(v.iter().map(|&x| int(x)).collect())
    }

    /// `(w, 0)` for an orbit-space vector `w`.
    pub fn extend(w: &[Rational]) -> Self {
        let mut e = w.to_vec();
        e.push(Rational::zero());
        ExtVector(e)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> &Rational {
        self.0.last().expect("empty extended vector")
    }

    /// The first `r` entries.
    pub fn spatial(&self) -> &[Rational] {
        &self.0[..self.0.len() - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "extended vector length mismatch");
        ExtVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "extended vector length mismatch");
        ExtVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ExtVector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn half(&self) -> Self {
        self.scale(&rat(1, 2))
    }

    pub fn dot(&self, other: &Self) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// `Σ v_i x_i` against a float vector of the same length.
    pub fn dot_f64(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(a, b)| to_f64(a) * b).sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }

    /// All entries have denominator dividing 2.
    pub fn is_half_integral(&self) -> bool {
        let two = BigInt::from(2);
        self.0.iter().all(|x| x.denom().is_one() || *x.denom() == two)
    }

    pub fn parse(items: &[impl AsRef<str>]) -> Result<Self, OrbitError> {
        items
            .iter()
            .enumerate()
            .map(|(i, s)| {
                parse_rational(s.as_ref()).ok_or_else(|| OrbitError::BadRational { index: i, text: s.as_ref().into() })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(ExtVector)
    }
}

impl fmt::Display for ExtVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// One scalar-curvature term `A_w e^{w·q}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    pub w: Vec<Rational>,
    pub a: Rational,
}

impl Weight {
    pub fn extended(&self) -> ExtVector {
        ExtVector::extend(&self.w)
    }
}

/// Raw orbit description with exact entries written as strings.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OrbitSpec {
    #[serde(default)]
    pub name: String,
    pub d: Vec<i64>,
    #[serde(default)]
    pub weights: Vec<WeightSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub w: Vec<String>,
    #[serde(rename = "A")]
    pub a: String,
}

/// Validated principal-orbit data.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitData {
    name: String,
    d: Vec<u32>,
    n: u32,
    weights: Vec<Weight>,
}

/// Parses and validates a raw orbit description.
pub fn build_orbit(spec: &OrbitSpec) -> Result<OrbitData, OrbitError> {
    let mut d = Vec::with_capacity(spec.d.len());
    for (i, &di) in spec.d.iter().enumerate() {
        if di < 1 || di > u32::MAX as i64 {
            return Err(OrbitError::BadDimension { index: i + 1, value: di });
        }
        d.push(di as u32);
    }
    let mut weights = Vec::with_capacity(spec.weights.len());
    for (i, ws) in spec.weights.iter().enumerate() {
        let w = ExtVector::parse(&ws.w)?.0;
        let a = parse_rational(&ws.a).ok_or_else(|| OrbitError::BadRational { index: i, text: ws.a.clone() })?;
        weights.push(Weight { w, a });
    }
    OrbitData::new(&spec.name, d, weights)
}

impl OrbitData {
    pub fn new(name: &str, d: Vec<u32>, weights: Vec<Weight>) -> Result<Self, OrbitError> {
        if d.is_empty() {
            return Err(OrbitError::Empty);
        }
        if let Some(i) = d.iter().position(|&x| x == 0) {
            return Err(OrbitError::BadDimension { index: i + 1, value: 0 });
        }
        let r = d.len();
        for (i, w) in weights.iter().enumerate() {
            if w.w.len() != r {
                return Err(OrbitError::DimensionMismatch { expected: r, got: w.w.len() });
            }
            if w.a.is_zero() {
                return Err(OrbitError::ZeroCoefficient { index: i });
            }
            if weights[..i].iter().any(|o| o.w == w.w) {
                return Err(OrbitError::DuplicateWeight { index: i, w: ExtVector(w.w.clone()).to_string() });
            }
        }
        let n = d.iter().sum();
        Ok(OrbitData { name: name.into(), d, n, weights })
    }

    /// Round sphere `S^n = SO(n+1)/SO(n)`: `S = n(n−1) e^{−q}`.
    pub fn sphere(n: u32) -> Self {
        let weights = if n > 1 { vec![Weight { w: vec![int(-1)], a: int((n * (n - 1)) as i64) }] } else { Vec::new() };
        Self::new(&format!("sphere-{n}"), vec![n], weights).expect("valid sphere data")
    }

    pub fn circle() -> Self {
        Self::new("circle", vec![1], Vec::new()).expect("valid circle data")
    }

    /// Product of two Einstein manifolds with Einstein constants `d_i(d_i − 1)`.
    pub fn warped(d1: u32, d2: u32) -> Self {
        let mut weights = Vec::new();
        for (i, di) in [d1, d2].into_iter().enumerate() {
            if di > 1 {
                let mut w = vec![int(0), int(0)];
                w[i] = int(-1);
                weights.push(Weight { w, a: int((di * (di - 1)) as i64) });
            }
        }
        Self::new(&format!("warped-{d1}-{d2}"), vec![d1, d2], weights).expect("valid warped data")
    }

    /// Circle bundle over a product of Kähler–Einstein factors of complex
    /// dimensions `m`, Euler class coefficients `b` and Chern ratios `kappa`.
    pub fn circle_bundle(m: &[u32], b: &[i64], kappa: &[Rational]) -> Result<Self, OrbitError> {
        if m.len() != b.len() || m.len() != kappa.len() {
            return Err(OrbitError::DimensionMismatch { expected: m.len(), got: b.len().min(kappa.len()) });
        }
        let r = m.len() + 1;
        let mut d = vec![1u32];
        d.extend(m.iter().map(|mi| 2 * mi));
        let mut weights = Vec::new();
        for i in 1..r {
            let di = int(d[i] as i64);
            let mut w = vec![int(0); r];
            w[0] = int(1);
            w[i] = int(-2);
            let bi = int(b[i - 1]);
            weights.push(Weight { w, a: -(&di * &bi * &bi) / int(4) });
        }
        for i in 1..r {
            let mut w = vec![int(0); r];
            w[i] = int(-1);
            weights.push(Weight { w, a: int(d[i] as i64) * &kappa[i - 1] });
        }
        Self::new("circle-bundle", d, weights)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn r(&self) -> usize {
        self.d.len()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> &[u32] {
        &self.d
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// `𝐝 = (d, −2)`.
    pub fn d_ext(&self) -> ExtVector {
        let mut v: Vec<Rational> = self.d.iter().map(|&x| int(x as i64)).collect();
        v.push(int(-2));
        ExtVector(v)
    }

    /// Extended weights with the zero vector prepended (`W̃ = W ∪ {0}`), with
    /// coefficient `None` for the zero vector.
    pub fn extended_weights(&self) -> Vec<(ExtVector, Option<Rational>)> {
        let mut out = vec![(ExtVector::zero(self.r() + 1), None)];
        for w in &self.weights {
            if w.w.iter().all(|x| x.is_zero()) {
                continue;
            }
            out.push((w.extended(), Some(w.a.clone())));
        }
        out
    }

    pub fn lorentz(&self) -> LorentzForm {
        LorentzForm { r: self.r(), d: self.d.clone(), n: self.n }
    }

    pub fn check_len(&self, v: &ExtVector) -> Result<(), OrbitError> {
        if v.len() != self.r() + 1 {
            return Err(OrbitError::DimensionMismatch { expected: self.r() + 1, got: v.len() });
        }
        Ok(())
    }

    /// Momentum variable names `p1 … pr, phi` (`p, phi` when `r = 1`).
    pub fn momentum_names(&self) -> Vec<String> {
        let mut v: Vec<String> =
            if self.r() == 1 { vec!["p".into()] } else { (1..=self.r()).map(|i| format!("p{i}")).collect() };
        v.push("phi".into());
        v
    }
}

/// The quadratic form `J(p, φ) = −(Σ p_i²/d_i + φ Σ p_i + (n−1)/4 φ²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LorentzForm {
    pub r: usize,
    pub d: Vec<u32>,
    pub n: u32,
}

impl LorentzForm {
    fn check(&self, v: &[Rational]) -> Result<(), OrbitError> {
        if v.len() != self.r + 1 {
            return Err(OrbitError::DimensionMismatch { expected: self.r + 1, got: v.len() });
        }
        Ok(())
    }

    /// Gram matrix entry `B_{ij}` in the `(p, φ)` basis.
    pub fn entry(&self, i: usize, j: usize) -> Rational {
        let r = self.r;
        match (i == r, j == r) {
            (true, true) => -rat(self.n as i64 - 1, 4),
            (true, false) | (false, true) => rat(-1, 2),
            (false, false) if i == j => rat(-1, self.d[i] as i64),
            _ => Rational::zero(),
        }
    }

    pub fn matrix(&self) -> Matrix {
        let k = self.r + 1;
        let rows: Vec<Vec<Rational>> = (0..k).map(|i| (0..k).map(|j| self.entry(i, j)).collect()).collect();
        Matrix::from_rows(&rows)
    }

    pub fn quadratic(&self, v: &ExtVector) -> Result<Rational, OrbitError> {
        self.bilinear(v, v)
    }

    pub fn bilinear(&self, v: &ExtVector, w: &ExtVector) -> Result<Rational, OrbitError> {
        self.check(&v.0)?;
        self.check(&w.0)?;
        let r = self.r;
        let mut acc = Rational::zero();
        let (pv, fv) = (&v.0[..r], &v.0[r]);
        let (pw, fw) = (&w.0[..r], &w.0[r]);
        for i in 0..r {
            acc += &pv[i] * &pw[i] / int(self.d[i] as i64);
        }
        let sum_pv: Rational = pv.iter().sum();
        let sum_pw: Rational = pw.iter().sum();
        acc += fv * &sum_pw / int(2) + fw * &sum_pv / int(2);
        acc += rat(self.n as i64 - 1, 4) * fv * fw;
        Ok(-acc)
    }

    /// `B v` as an extended covector.
    pub fn apply(&self, v: &ExtVector) -> Result<ExtVector, OrbitError> {
        self.check(&v.0)?;
        let k = self.r + 1;
        Ok(ExtVector((0..k).map(|i| (0..k).map(|j| self.entry(i, j) * &v.0[j]).sum()).collect()))
    }

    pub fn quadratic_f64(&self, v: &[f64]) -> f64 {
        self.bilinear_f64(v, v)
    }

    pub fn bilinear_f64(&self, v: &[f64], w: &[f64]) -> f64 {
        let r = self.r;
        let mut acc = 0.0;
        for i in 0..r {
            acc += v[i] * w[i] / self.d[i] as f64;
        }
        let sv: f64 = v[..r].iter().sum();
        let sw: f64 = w[..r].iter().sum();
        acc += 0.5 * (v[r] * sw + w[r] * sv);
        acc += (self.n as f64 - 1.0) / 4.0 * v[r] * w[r];
        -acc
    }

    /// `B v` for a float vector.
    pub fn apply_f64(&self, v: &[f64]) -> Vec<f64> {
        let r = self.r;
        let sv: f64 = v[..r].iter().sum();
        let mut out: Vec<f64> = (0..r).map(|i| -v[i] / self.d[i] as f64 - 0.5 * v[r]).collect();
        out.push(-0.5 * sv - (self.n as f64 - 1.0) / 4.0 * v[r]);
        out
    }

    /// `1 − Σ v_i w_i / d_i`, asserted equal to `J(v+𝐝, w+𝐝)`.
    pub fn lemma51_check(&self, v: &[Rational], w: &[Rational]) -> Result<Rational, OrbitError> {
        if v.len() != self.r || w.len() != self.r {
            return Err(OrbitError::DimensionMismatch { expected: self.r, got: v.len().min(w.len()) });
        }
        let mut value = Rational::one();
        for i in 0..self.r {
            value -= &v[i] * &w[i] / int(self.d[i] as i64);
        }
        let dext = self.d_ext();
        let lhs = self.bilinear(&ExtVector::extend(v).add(&dext), &ExtVector::extend(w).add(&dext))?;
        assert_eq!(lhs, value, "bilinear form disagrees with 1 - sum v_i w_i / d_i");
        Ok(value)
    }

    pub fn d_ext(&self) -> ExtVector {
        let mut v: Vec<Rational> = self.d.iter().map(|&x| int(x as i64)).collect();
        v.push(int(-2));
        ExtVector(v)
    }

    pub fn is_null(&self, v: &ExtVector) -> Result<bool, OrbitError> {
        Ok(self.quadratic(v)?.is_zero())
    }

    pub fn is_null_f64(&self, v: &[f64], tol: f64) -> bool {
        self.quadratic_f64(v).abs() <= tol
    }

    /// `(positive, negative, zero)` inertia counts, computed exactly.
    pub fn signature(&self) -> (usize, usize, usize) {
        signature(&self.matrix())
    }

    /// `J` as a polynomial in `p_1 … p_r, φ`.
    pub fn quadratic_poly(&self) -> Poly<Rational> {
        let k = self.r + 1;
        let mut p = Poly::zero(k);
        for i in 0..k {
            for j in 0..k {
                let c = self.entry(i, j);
                if c.is_zero() {
                    continue;
                }
                let mut e = vec![0u32; k];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, c);
            }
        }
        p
    }

    /// Leading principal minors of `−B`, used as a Sylvester-style check:
    /// `−J` has signature `(r, 1)` when exactly one pivot ratio is negative.
    pub fn pivots_of_negated(&self) -> Vec<Rational> {
        let k = self.r + 1;
        let mut m = self.matrix();
        for i in 0..k {
            for j in 0..k {
                m[(i, j)] = -m[(i, j)].clone();
            }
        }
        // the spatial block is diagonal and positive, so plain LDL^T pivots exist
        let mut pivots = Vec::with_capacity(k);
        for c in 0..k {
            let p = m[(c, c)].clone();
            pivots.push(p.clone());
            if p.is_zero() {
                break;
            }
            for i in c + 1..k {
                let f = &m[(i, c)] / &p;
                for j in c..k {
                    let v = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = v;
                }
            }
        }
        pivots
    }

    pub fn negative_pivot_count(&self) -> usize {
        self.pivots_of_negated().iter().filter(|p| p.is_negative()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_named_orbits() {
        assert_eq!(OrbitData::sphere(4).n(), 4);
        assert_eq!(OrbitData::circle().weights().len(), 0);
        let w = OrbitData::warped(2, 2);
        assert_eq!(w.n(), 4);
        assert_eq!(w.weights()[1].w, vec![int(0), int(-1)]);
        assert_eq!(w.weights()[1].a, int(2));
    }

    #[test]
    fn rejects_bad_input() {
        let dup = OrbitSpec {
            name: "x".into(),
            d: vec![2],
            weights: vec![
                WeightSpec { w: vec!["-1".into()], a: "2".into() },
                WeightSpec { w: vec!["-1".into()], a: "3".into() },
            ],
        };
        assert!(matches!(build_orbit(&dup), Err(OrbitError::DuplicateWeight { index: 1, .. })));
        let zero = OrbitSpec {
            d: vec![2],
            weights: vec![WeightSpec { w: vec!["-1".into()], a: "0".into() }],
            ..Default::default()
        };
        assert!(matches!(build_orbit(&zero), Err(OrbitError::ZeroCoefficient { index: 0 })));
        let bad = OrbitSpec { d: vec![2, 0], ..Default::default() };
        assert!(matches!(build_orbit(&bad), Err(OrbitError::BadDimension { index: 2, value: 0 })));
    }

    #[test]
    fn form_values() {
        let j = OrbitData::sphere(4).lorentz();
        assert_eq!(j.quadratic(&j.d_ext()).unwrap(), int(1));
        assert_eq!(j.quadratic(&ExtVector::from_ints(&[1, 0])).unwrap(), rat(-1, 4));
        assert_eq!(j.bilinear(&ExtVector::from_ints(&[2, -1]), &ExtVector::from_ints(&[1, -1])).unwrap(), rat(1, 4));
        // the null directions are 𝐝 + (±√n, 0)
        assert!(j.is_null(&j.d_ext().add(&ExtVector::from_ints(&[2, 0]))).unwrap());
        assert!(j.is_null(&j.d_ext().add(&ExtVector::from_ints(&[-2, 0]))).unwrap());
        assert!(!j.is_null(&ExtVector::from_ints(&[2, 0])).unwrap());
        assert!(!j.is_null(&j.d_ext()).unwrap());
        assert!(j.is_null(&ExtVector::from_ints(&[1, -1])).unwrap());
        assert_eq!(j.quadratic(&ExtVector::from_ints(&[2, -1])).unwrap(), rat(1, 4));
        assert!(!j.is_null(&ExtVector::from_ints(&[2, -1])).unwrap());
        assert!(j.quadratic(&ExtVector::from_ints(&[1])).is_err());
    }

    #[test]
    fn null_pairing_examples() {
        let j = OrbitData::sphere(4).lorentz();
        assert_eq!(j.lemma51_check(&[int(-2)], &[int(-2)]).unwrap(), int(0));
        let w = OrbitData::warped(2, 2).lorentz();
        let v = [int(-1), int(-1)];
        assert_eq!(w.lemma51_check(&v, &v).unwrap(), int(0));
        let w3 = OrbitData::warped(3, 3).lorentz();
        assert_ne!(w3.lemma51_check(&v, &v).unwrap(), int(0));
    }

    #[test]
    fn signature_is_lorentzian() {
        for d in [vec![1], vec![4], vec![2, 2], vec![1, 2, 4, 6]] {
            let o = OrbitData::new("t", d.clone(), vec![]).unwrap();
            let j = o.lorentz();
            assert_eq!(j.signature(), (1, d.len(), 0));
            assert_eq!(j.negative_pivot_count(), 1);
        }
    }

    #[test]
    fn circle_bundle_coefficients() {
        let o = OrbitData::circle_bundle(&[1, 2], &[2, 4], &[int(2), int(4)]).unwrap();
        assert_eq!(o.d(), &[1, 2, 4]);
        assert_eq!(o.weights()[0].a, int(-2));
        assert_eq!(o.weights()[3].a, int(16));
    }
}
