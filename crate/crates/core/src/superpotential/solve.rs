//! Exact solver for the quadratic coefficient system
//! `Σ_{a+c=b} J(a,c) f_a f_c = A_w` (at `b = 𝐝+𝐰`), `E` (at `b = 𝐝`), `0` otherwise.
//!
//! Every nonempty subset of the candidates is tried as a support with all
//! coefficients nonzero. Within a support, equations with a single unknown
//! are solved directly (square roots branch on sign); when no equation has
//! a single unknown a free parameter is introduced and later pinned down by
//! any fully determined equation that still depends on it.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::hull::hull_vertices;
use super::prop53::{prop53_certificate, Prop53Witness};
use super::{superpotential_residual_with, ExpSum, SuperpotentialError};
use crate::algebra::laurent::PARAM_NAMES;
use crate::algebra::{int, LaurentScalar, Rational};
use crate::orbit::{ExtVector, OrbitData};

/// Energy coefficient used at the exponent `𝐝`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Energy {
    /// `E = s²`.
    Formal,
    /// `E = 0`, the limiting cases.
    Zero,
}

impl Energy {
    pub fn value(self) -> LaurentScalar {
        match self {
            Energy::Formal => LaurentScalar::energy(),
            Energy::Zero => LaurentScalar::zero(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub energy: Energy,
    pub max_candidates: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { energy: Energy::Formal, max_candidates: 16 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    Solution,
    NonexistenceByProp53,
    NoSolutionFound,
}

/// The first equation that could not be satisfied.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    pub b: ExtVector,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuperpotentialCertificate {
    pub kind: CertificateKind,
    pub solution: Option<ExpSum>,
    pub witness: Option<Prop53Witness>,
    pub obstruction: Option<Obstruction>,
    pub warnings: Vec<String>,
}

struct Equation {
    b: ExtVector,
    /// `(i, j, weight)` with `i ≤ j`; weight is `J(c_i, c_j)` doubled off the diagonal.
    terms: Vec<(usize, usize, Rational)>,
    target: LaurentScalar,
}

#[derive(Clone)]
struct State {
    values: Vec<Option<LaurentScalar>>,
    next_param: usize,
}

impl State {
    fn substitute(&self, index: usize, value: &LaurentScalar) -> Option<State> {
        let mut values = Vec::with_capacity(self.values.len());
        for v in &self.values {
            values.push(match v {
                Some(x) => {
                    let y = x.substitute(index, value)?;
                    if y.is_zero() {
                        return None;
                    }
                    Some(y)
                }
                None => None,
            });
        }
        Some(State { values, next_param: self.next_param })
    }
}

fn targets(orbit: &OrbitData, energy: &LaurentScalar) -> BTreeMap<ExtVector, LaurentScalar> {
    let d = orbit.d_ext();
    let mut t: BTreeMap<ExtVector, LaurentScalar> = BTreeMap::new();
    let mut add = |b: ExtVector, v: LaurentScalar| {
        let e = t.entry(b).or_default();
        *e = &*e + &v;
    };
    add(d.clone(), energy.clone());
    for w in orbit.weights() {
        add(d.add(&w.extended()), LaurentScalar::from_rational(w.a.clone()));
    }
    t.retain(|_, v| !v.is_zero());
    t
}

fn build_equations(
    orbit: &OrbitData,
    support: &[ExtVector],
    targets: &BTreeMap<ExtVector, LaurentScalar>,
) -> Result<Vec<Equation>, Obstruction> {
    let form = orbit.lorentz();
    let mut by_b: BTreeMap<ExtVector, Vec<(usize, usize, Rational)>> = BTreeMap::new();
    for i in 0..support.len() {
        for j in i..support.len() {
            let jv = form.bilinear(&support[i], &support[j]).expect("support length matches the orbit");
            if jv.is_zero() {
                continue;
            }
            let weight = if i == j { jv } else { jv * int(2) };
            by_b.entry(support[i].add(&support[j])).or_default().push((i, j, weight));
        }
    }
    for (b, t) in targets {
        if !by_b.contains_key(b) {
            return Err(Obstruction { b: b.clone(), detail: format!("target {t} is not reached by any pair") });
        }
    }
    Ok(by_b
        .into_iter()
        .map(|(b, terms)| {
            let target = targets.get(&b).cloned().unwrap_or_default();
            Equation { b, terms, target }
        })
        .collect())
}

enum Step {
    Done(State),
    Branch(Vec<State>),
    Fail(Obstruction),
}

/// Solutions `p = value` of `R = 0` for a binomial `R` in one free parameter.
fn solve_parameter(r: &LaurentScalar) -> Vec<(usize, LaurentScalar)> {
    let mut params: Vec<usize> = r.params().into_iter().collect();
    params.reverse();
    for p in params {
        let split = r.split_by_symbol(p);
        if split.len() != 2 {
            continue;
        }
        let mut it = split.iter();
        let (m, beta) = it.next().unwrap();
        let (k, alpha) = it.next().unwrap();
        let Some(rhs) = (-beta).try_div(alpha) else { continue };
        match k - m {
            1 => return vec![(p, rhs)],
            2 => {
                let Some(root) = rhs.try_sqrt() else { continue };
                return vec![(p, root.clone()), (p, -root)];
            }
            _ => {}
        }
    }
    Vec::new()
}

fn step(eqs: &[Equation], mut st: State) -> Step {
    'outer: loop {
        for eq in eqs {
            let mut known = LaurentScalar::zero();
            let mut diag = Rational::zero();
            let mut linear = LaurentScalar::zero();
            let mut unknown: Option<usize> = None;
            let mut several = false;
            for (i, j, w) in &eq.terms {
                match (&st.values[*i], &st.values[*j]) {
                    (Some(a), Some(b)) => known = &known + &(a * b).scale(w),
                    (None, None) if i == j => {
                        if unknown.is_some_and(|u| u != *i) {
                            several = true;
                        }
                        unknown = Some(*i);
                        diag += w;
                    }
                    (None, None) => several = true,
                    (Some(a), None) | (None, Some(a)) => {
                        let x = if st.values[*i].is_none() { *i } else { *j };
                        if unknown.is_some_and(|u| u != x) {
                            several = true;
                        }
                        unknown = Some(x);
                        linear = &linear + &a.scale(w);
                    }
                }
            }
            if several {
                continue;
            }
            let rest = &known - &eq.target;
            let Some(x) = unknown else {
                if rest.is_zero() {
                    continue;
                }
                let sols = solve_parameter(&rest);
                if sols.is_empty() {
                    return Step::Fail(Obstruction {
                        b: eq.b.clone(),
                        detail: format!("residual {rest} cannot vanish"),
                    });
                }
                return Step::Branch(sols.iter().filter_map(|(p, v)| st.substitute(*p, v)).collect());
            };
            // diag x² + linear x + rest = 0 with x ≠ 0
            if diag.is_zero() {
                if linear.is_zero() {
                    if rest.is_zero() {
                        continue;
                    }
                    return Step::Fail(Obstruction {
                        b: eq.b.clone(),
                        detail: format!("residual {rest} cannot vanish"),
                    });
                }
                let Some(v) = (-&rest).try_div(&linear) else {
                    return Step::Fail(Obstruction {
                        b: eq.b.clone(),
                        detail: format!("cannot divide {} by {linear}", -&rest),
                    });
                };
                if v.is_zero() {
                    return Step::Fail(Obstruction {
                        b: eq.b.clone(),
                        detail: "forces a vanishing coefficient".into(),
                    });
                }
                st.values[x] = Some(v);
                continue 'outer;
            }
            let roots = if linear.is_zero() {
                let sq = (-&rest).scale(&(Rational::from_integer(1.into()) / &diag));
                if sq.is_zero() {
                    return Step::Fail(Obstruction {
                        b: eq.b.clone(),
                        detail: "forces a vanishing coefficient".into(),
                    });
                }
                match sq.try_sqrt() {
                    Some(root) => vec![root.clone(), -root],
                    None => {
                        return Step::Fail(Obstruction {
                            b: eq.b.clone(),
                            detail: format!("no exact square root of {sq}"),
                        })
                    }
                }
            } else {
                // x = (−L ± √(L² − 4 D R)) / 2D
                let disc = &(&linear * &linear) - &rest.scale(&(&diag * int(4)));
                let Some(root) = disc.try_sqrt() else {
                    return Step::Fail(Obstruction {
                        b: eq.b.clone(),
                        detail: format!("no exact square root of {disc}"),
                    });
                };
                let inv = Rational::from_integer(1.into()) / (&diag * int(2));
                vec![(&-&linear + &root).scale(&inv), (&-&linear - &root).scale(&inv)]
                    .into_iter()
                    .filter(|v| !v.is_zero())
                    .collect()
            };
            return Step::Branch(
                roots
                    .into_iter()
                    .map(|v| {
                        let mut s = st.clone();
                        s.values[x] = Some(v);
                        s
                    })
                    .collect(),
            );
        }
        // stuck: free the lexicographically largest unknown
        match st.values.iter().rposition(|v| v.is_none()) {
            None => return Step::Done(st),
            Some(x) => {
                if st.next_param > PARAM_NAMES.len() - 1 {
                    return Step::Fail(Obstruction {
                        b: ExtVector::zero(0),
                        detail: "too many free parameters".into(),
                    });
                }
                st.values[x] = Some(LaurentScalar::param(st.next_param));
                st.next_param += 1;
            }
        }
    }
}

fn explore(eqs: &[Equation], st: State, out: &mut Vec<State>, first_fail: &mut Option<Obstruction>) {
    match step(eqs, st) {
        Step::Done(s) => out.push(s),
        Step::Branch(states) => {
            for s in states {
                explore(eqs, s, out, first_fail);
            }
        }
        Step::Fail(o) => {
            first_fail.get_or_insert(o);
        }
    }
}

/// Renames the free parameters of `f` to `a, b, …` in order of appearance
/// and fixes the overall sign.
fn normalize(f: &ExpSum) -> ExpSum {
    let mut used: Vec<usize> = Vec::new();
    for (_, c) in f.terms() {
        for p in c.params() {
            if !used.contains(&p) {
                used.push(p);
            }
        }
    }
    used.sort();
    let mut g = f.clone();
    // shift out of the way first so renames cannot collide
    let offset = PARAM_NAMES.len();
    for (k, &p) in used.iter().enumerate() {
        g = g.substitute(p, &LaurentScalar::param(offset + k)).expect("monomial substitution");
    }
    for k in 0..used.len() {
        g = g.substitute(offset + k, &LaurentScalar::param(1 + k)).expect("monomial substitution");
    }
    let negative = g.terms().next().is_some_and(|(_, c)| c.leading_sign() < 0);
    if negative {
        g.neg()
    } else {
        g
    }
}

/// Lemma 5.2(ii): every vertex of the support hull is null, or `2c = 𝐝 + 𝐰`
/// with `J(c,c) f_c² = A_w` (`A_0 = E`).
pub fn vertex_law_violations(orbit: &OrbitData, f: &ExpSum, energy: Energy) -> Vec<String> {
    let form = orbit.lorentz();
    let exps = f.exponents();
    let d = orbit.d_ext();
    let mut out = Vec::new();
    for i in hull_vertices(&exps) {
        let c = &exps[i];
        let jcc = form.quadratic(c).expect("length matches");
        if jcc.is_zero() {
            continue;
        }
        let x = c.scale(&int(2)).sub(&d);
        let target = if x.is_zero() {
            Some(energy.value())
        } else {
            orbit.weights().iter().find(|w| w.extended() == x).map(|w| LaurentScalar::from_rational(w.a.clone()))
        };
        let fc = f.coefficient(c).expect("exponent present");
        let lhs = (fc * fc).scale(&jcc);
        match target {
            Some(t) if t == lhs => {}
            Some(t) => out.push(format!("vertex {c}: J(c,c) f_c^2 = {lhs}, expected {t}")),
            None => out.push(format!("vertex {c} is neither null nor half of 𝐝 + w")),
        }
    }
    out
}

/// Lemma 5.2(iv) sign check, applied only when no vertex of the support
/// hull is null: `J(𝐝 + 𝐰, 𝐝 + 𝐰)` should have the sign of `A_w` at every
/// vertex `𝐰 ≠ 0` of `conv(W̃)`.
pub fn lemma52_warnings(orbit: &OrbitData, f: &ExpSum) -> Vec<String> {
    let form = orbit.lorentz();
    let exps = f.exponents();
    if hull_vertices(&exps).iter().any(|&i| form.is_null(&exps[i]).unwrap_or(false)) {
        return Vec::new();
    }
    let wt = orbit.extended_weights();
    let pts: Vec<ExtVector> = wt.iter().map(|(w, _)| w.clone()).collect();
    let d = orbit.d_ext();
    let mut out = Vec::new();
    for i in hull_vertices(&pts) {
        let Some(a) = &wt[i].1 else { continue };
        let j = form.quadratic(&d.add(&pts[i])).expect("length matches");
        let sj = crate::algebra::sign_of(&j);
        if sj != crate::algebra::sign_of(a) {
            out.push(format!("weight {}: J(𝐝+w) = {} has sign {} but A_w = {}", pts[i], j, sj, a));
        }
    }
    out
}

pub fn solve_superpotential(
    orbit: &OrbitData,
    candidates: &[ExtVector],
) -> Result<Vec<SuperpotentialCertificate>, SuperpotentialError> {
    solve_superpotential_with(orbit, candidates, &SolveOptions::default())
}

pub fn solve_superpotential_with(
    orbit: &OrbitData,
    candidates: &[ExtVector],
    opts: &SolveOptions,
) -> Result<Vec<SuperpotentialCertificate>, SuperpotentialError> {
    for c in candidates {
        if c.len() != orbit.r() + 1 {
            return Err(SuperpotentialError::DimensionMismatch {
                exponent: c.to_string(),
                expected: orbit.r() + 1,
                got: c.len(),
            });
        }
    }
    let mut cands: Vec<ExtVector> = Vec::new();
    for c in candidates {
        if !cands.contains(c) {
            cands.push(c.clone());
        }
    }
    if cands.len() > opts.max_candidates {
        return Err(SuperpotentialError::TooManyCandidates { count: cands.len(), max: opts.max_candidates });
    }
    cands.sort();
    let energy = opts.energy.value();
    let tg = targets(orbit, &energy);
    let m = cands.len();
    let mut found: Vec<ExpSum> = Vec::new();
    let mut full_obstruction: Option<Obstruction> = None;
    // full support first so its obstruction is the one reported
    let mut masks: Vec<u32> = (1..(1u32 << m)).collect();
    masks.sort_by_key(|mask| std::cmp::Reverse(mask.count_ones()));
    for mask in masks {
        let support: Vec<ExtVector> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| cands[i].clone()).collect();
        let full = mask.count_ones() as usize == m;
        let eqs = match build_equations(orbit, &support, &tg) {
            Ok(e) => e,
            Err(o) => {
                if full {
                    full_obstruction = Some(o);
                }
                continue;
            }
        };
        let mut states = Vec::new();
        let mut fail = None;
        explore(&eqs, State { values: vec![None; support.len()], next_param: 1 }, &mut states, &mut fail);
        if full {
            full_obstruction = fail;
        }
        for st in states {
            let f = ExpSum::from_terms(
                support.iter().cloned().zip(st.values.into_iter().map(|v| v.expect("all values set"))),
            );
            if f.len() != support.len() || !superpotential_residual_with(orbit, &f, &energy).is_empty() {
                continue;
            }
            let f = normalize(&f);
            if !found.contains(&f) {
                found.push(f);
            }
        }
    }
    if found.is_empty() {
        return Ok(vec![SuperpotentialCertificate {
            kind: CertificateKind::NoSolutionFound,
            solution: None,
            witness: prop53_certificate(orbit, &cands),
            obstruction: full_obstruction,
            warnings: Vec::new(),
        }]);
    }
    Ok(found
        .into_iter()
        .map(|f| {
            let mut warnings = vertex_law_violations(orbit, &f, opts.energy);
            warnings.extend(lemma52_warnings(orbit, &f));
            SuperpotentialCertificate {
                kind: CertificateKind::Solution,
                solution: Some(f),
                witness: None,
                obstruction: None,
                warnings,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_laurent;
    use crate::algebra::rat;

    fn v(x: &[(i64, i64)]) -> ExtVector {
        ExtVector(x.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    fn coeffs(f: &ExpSum) -> Vec<(ExtVector, String)> {
        f.terms().map(|(c, x)| (c.clone(), x.to_string())).collect()
    }

    #[test]
    fn bryant_rediscovered() {
        let o = OrbitData::sphere(4);
        let cands = [v(&[(2, 1), (-1, 1)]), v(&[(3, 2), (-1, 1)]), v(&[(1, 1), (-1, 1)])];
        let certs = solve_superpotential(&o, &cands).unwrap();
        let sols: Vec<_> = certs.iter().filter_map(|c| c.solution.as_ref()).collect();
        assert_eq!(sols.len(), 1, "{:?}", sols.iter().map(|s| s.render()).collect::<Vec<_>>());
        assert_eq!(
            coeffs(sols[0]),
            vec![(v(&[(1, 1), (-1, 1)]), "12*s^-1".to_string()), (v(&[(2, 1), (-1, 1)]), "2*s".to_string())]
        );
        assert!(certs[0].warnings.is_empty());
    }

    #[test]
    fn circle_family() {
        let o = OrbitData::circle();
        let cands = [v(&[(1, 2), (-1, 1)]), v(&[(1, 1), (-1, 1)]), v(&[(0, 1), (-1, 1)])];
        let certs = solve_superpotential(&o, &cands).unwrap();
        let sols: Vec<_> = certs.iter().filter_map(|c| c.solution.clone()).collect();
        let fam = ExpSum::from_terms([
            (v(&[(1, 1), (-1, 1)]), parse_laurent("a").unwrap()),
            (v(&[(0, 1), (-1, 1)]), parse_laurent("s^2/a").unwrap()),
        ]);
        assert!(sols.contains(&fam), "{:?}", sols.iter().map(|s| s.render()).collect::<Vec<_>>());
        let zero = solve_superpotential_with(&o, &cands, &SolveOptions { energy: Energy::Zero, ..Default::default() })
            .unwrap();
        let zs: Vec<_> = zero.iter().filter_map(|c| c.solution.clone()).collect();
        assert_eq!(zs.len(), 2);
    }

    #[test]
    fn warped_d33_has_none() {
        let o = OrbitData::warped(3, 3);
        let d = o.d_ext();
        let mut cands: Vec<ExtVector> = o.extended_weights().into_iter().map(|(w, _)| d.add(&w).half()).collect();
        for x in [[-1, -1], [-1, 1], [1, -1]] {
            cands.push(d.add(&ExtVector::from_ints(&[x[0], x[1], 0])).half());
        }
        let certs = solve_superpotential(&o, &cands).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!(certs[0].kind, CertificateKind::NoSolutionFound);
        assert!(certs[0].obstruction.is_some());
    }

    #[test]
    fn warped_d22_rediscovered() {
        let o = OrbitData::warped(2, 2);
        let d = o.d_ext();
        let mut cands: Vec<ExtVector> = o.extended_weights().into_iter().map(|(w, _)| d.add(&w).half()).collect();
        for x in [[-1, -1], [-1, 1], [1, -1]] {
            cands.push(d.add(&ExtVector::from_ints(&[x[0], x[1], 0])).half());
        }
        let certs = solve_superpotential(&o, &cands).unwrap();
        let sols: Vec<_> = certs.iter().filter_map(|c| c.solution.clone()).collect();
        let paper = ExpSum::from_terms([
            (v(&[(1, 2), (3, 2), (-1, 1)]), parse_laurent("s").unwrap()),
            (v(&[(3, 2), (1, 2), (-1, 1)]), parse_laurent("s").unwrap()),
            (v(&[(1, 2), (1, 2), (-1, 1)]), parse_laurent("4/s").unwrap()),
        ]);
        assert!(sols.contains(&paper), "{:?}", sols.iter().map(|s| s.render()).collect::<Vec<_>>());
    }

    fn bundle_candidates(o: &OrbitData) -> Vec<ExtVector> {
        let r = o.r();
        let d = o.d_ext();
        let mut e1 = vec![0i64; r + 1];
        e1[0] = -1;
        let mut cands = vec![d.add(&ExtVector::from_ints(&e1)).half()];
        for i in 1..r {
            let mut w = vec![0i64; r + 1];
            w[0] = 1;
            w[i] = -2;
            cands.push(d.add(&ExtVector::from_ints(&w)).half());
        }
        e1[0] = 1;
        cands.push(d.add(&ExtVector::from_ints(&e1)).half());
        cands
    }

    #[test]
    fn circle_bundle_condition() {
        // kappa_i / |b_i| constant
        let good = OrbitData::circle_bundle(&[1, 2], &[2, 4], &[int(1), int(2)]).unwrap();
        let certs = solve_superpotential(&good, &bundle_candidates(&good)).unwrap();
        assert_eq!(certs[0].kind, CertificateKind::Solution);
        let f = certs[0].solution.as_ref().unwrap();
        assert_eq!(f.len(), 4);
        let bad = OrbitData::circle_bundle(&[1, 2], &[2, 4], &[int(1), int(3)]).unwrap();
        let certs = solve_superpotential(&bad, &bundle_candidates(&bad)).unwrap();
        assert_eq!(certs[0].kind, CertificateKind::NoSolutionFound);
    }
}
