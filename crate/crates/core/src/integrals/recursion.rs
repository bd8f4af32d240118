//! Canonical brackets and the level-by-level recursion for generalized first
//! integrals `{F, 𝓗} = Φ𝓗` of the steady Hamiltonian.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::exppoly::{default_names, j_poly, lift, steady_hamiltonian, ExpPolySum, MomPoly};
use super::IntegralError;
use crate::algebra::linear::{solve, Matrix};
use crate::algebra::poly::monomials_of_degree;
use crate::algebra::{rat, LaurentScalar, Monomial, Poly, Rational};
use crate::dynamics::{Params, PhasePoint};
use crate::orbit::{ExtVector, OrbitData};

/// `Σ_i (∂F/∂q_i ∂G/∂p_i − ∂F/∂p_i ∂G/∂q_i)` over all `r + 1` slots.
pub fn poisson_bracket(f: &ExpPolySum, g: &ExpPolySum) -> Result<ExpPolySum, IntegralError> {
    if f.nvars() != g.nvars() {
        return Err(IntegralError::DimensionMismatch { expected: f.nvars(), got: g.nvars() });
    }
    let mut out = ExpPolySum::new(f.nvars());
    for i in 0..f.nvars() {
        out = out.add(&f.diff_q(i).mul(&g.diff_p(i)));
        out = out.sub(&f.diff_p(i).mul(&g.diff_q(i)));
    }
    Ok(out)
}

/// Seed level `(𝐜, F_𝐜, ψ_𝐜)` of the recursion.
#[derive(Clone, Debug, PartialEq)]
pub struct Seed {
    pub c: ExtVector,
    pub f_c: MomPoly,
    pub psi_c: MomPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralCertificate {
    pub f: ExpPolySum,
    pub phi: ExpPolySum,
    /// `{F, 𝓗} − Φ𝓗`.
    pub residual: ExpPolySum,
    /// `F` lies in the ideal generated by `𝓗`.
    pub trivial: bool,
    /// Levels beyond the seed that carried nonzero terms.
    pub levels_used: usize,
}

impl IntegralCertificate {
    pub fn is_valid(&self) -> bool {
        self.residual.is_empty()
    }

    /// String tables `(exponent, F_𝐛, Φ_𝐛)` for serialization.
    pub fn to_rows(&self) -> Vec<(Vec<String>, String, String)> {
        let names = default_names(self.f.nvars());
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut keys: Vec<ExtVector> = self.f.terms().map(|(b, _)| b.clone()).collect();
        keys.extend(self.phi.terms().map(|(b, _)| b.clone()));
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .rev()
            .map(|b| {
                let show = |s: &ExpPolySum| s.coefficient(&b).map(|p| p.render(&refs)).unwrap_or_else(|| "0".into());
                (b.0.iter().map(crate::algebra::fmt_rational).collect(), show(&self.f), show(&self.phi))
            })
            .collect()
    }
}

/// Solves the recursion outward from `seed`, exploring at most `levels`
/// levels past it, and certifies the result with an exact bracket.
pub fn recursion_solve(orbit: &OrbitData, seed: &Seed, levels: usize) -> Result<IntegralCertificate, IntegralError> {
    let k = orbit.r() + 1;
    for got in [seed.c.len(), seed.f_c.nvars(), seed.psi_c.nvars()] {
        if got != k {
            return Err(IntegralError::DimensionMismatch { expected: k, got });
        }
    }
    let j = j_poly(orbit);
    let d = orbit.d_ext();
    let h = steady_hamiltonian(orbit);

    let seed_lhs = grad_along(&j, &seed.c).mul(&seed.f_c).sub(&seed.psi_c.mul(&j));
    if !seed_lhs.is_zero() {
        return Err(obstructed(&seed.c, &seed_lhs, "seed equation fails"));
    }

    if let Some(g) = seed.f_c.exact_div(&j) {
        if grad_along(&j, &seed.c).mul(&g) == seed.psi_c {
            let lead = ExpPolySum::monomial(seed.c.add(&d.half()), g);
            let f = lead.mul(&h);
            let phi = poisson_bracket(&lead, &h)?;
            let residual = poisson_bracket(&f, &h)?.sub(&phi.mul(&h));
            return Ok(IntegralCertificate { f, phi, residual, trivial: true, levels_used: 0 });
        }
    }

    // shifts 𝐝 + 𝐰 with coefficients A_w (A_0 = E = s²)
    let shifts: Vec<(ExtVector, LaurentScalar)> = orbit
        .extended_weights()
        .into_iter()
        .map(|(w, a)| (d.add(&w), a.map(LaurentScalar::from_rational).unwrap_or_else(LaurentScalar::energy)))
        .collect();

    let mut solved: BTreeMap<ExtVector, (MomPoly, MomPoly)> = BTreeMap::new();
    solved.insert(seed.c.clone(), (seed.f_c.clone(), seed.psi_c.clone()));
    let mut current = solved.clone();
    let mut levels_used = 0;
    loop {
        let mut rhs: BTreeMap<ExtVector, MomPoly> = BTreeMap::new();
        for (b, (fb, psib)) in &current {
            for (shift, a) in &shifts {
                let contrib = psib.add(&directional(fb, shift));
                if contrib.is_zero() {
                    continue;
                }
                let entry = rhs.entry(b.add(shift)).or_insert_with(|| MomPoly::zero(k));
                *entry = entry.sub(&contrib.scale(a));
            }
        }
        rhs.retain(|_, v| !v.is_zero());
        let Some((first_b, first_r)) = rhs.iter().next() else { break };
        if levels_used == levels {
            return Err(obstructed(first_b, first_r, "level limit reached"));
        }
        levels_used += 1;
        let mut next = BTreeMap::new();
        for (b, r) in &rhs {
            let (fb, psib) = solve_level(&j, b, r, &shifts)?;
            next.insert(b.clone(), (fb, psib));
        }
        for (b, v) in &next {
            solved.insert(b.clone(), v.clone());
        }
        current = next;
    }

    let mut f = ExpPolySum::new(k);
    let mut phi = ExpPolySum::new(k);
    let half_d = d.half();
    for (b, (fb, psib)) in &solved {
        f.add_term(b.clone(), fb.clone());
        phi.add_term(b.clone(), psib.add(&directional(fb, &half_d)));
    }
    let residual = poisson_bracket(&f, &h)?.sub(&phi.mul(&h));
    Ok(IntegralCertificate { f, phi, residual, trivial: false, levels_used })
}

fn obstructed(b: &ExtVector, remainder: &MomPoly, reason: &str) -> IntegralError {
    let names = default_names(remainder.nvars());
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    IntegralError::RecursionObstructed { b: b.to_string(), remainder: remainder.render(&refs), reason: reason.into() }
}

/// `v·∇F`.
fn directional(f: &MomPoly, v: &ExtVector) -> MomPoly {
    f.directional(&v.0)
}

/// `𝐛·∇J`.
fn grad_along(j: &MomPoly, b: &ExtVector) -> MomPoly {
    directional(j, b)
}

/// Finds `F_𝐛, ψ_𝐛` with `(𝐛·∇J)F_𝐛 − ψ_𝐛 J = R`. Terminal solutions (no
/// contribution to the next level) are preferred; otherwise `F_𝐛` is reduced
/// modulo `J` under lex order.
fn solve_level(
    j: &MomPoly,
    b: &ExtVector,
    r: &MomPoly,
    shifts: &[(ExtVector, LaurentScalar)],
) -> Result<(MomPoly, MomPoly), IntegralError> {
    let k = r.nvars();
    let jr: Poly<Rational> = j.map_coefficients(|c| c.as_rational().expect("J has rational coefficients"));
    let bj = jr.directional(&b.0);

    // split R by Laurent monomial and momentum degree
    let mut parts: BTreeMap<(Monomial, u32), Poly<Rational>> = BTreeMap::new();
    for (e, c) in r.terms() {
        let deg = e.iter().sum::<u32>();
        for (m, q) in c.terms() {
            parts.entry((m.clone(), deg)).or_insert_with(|| Poly::zero(k)).add_term(e.clone(), q.clone());
        }
    }

    let mut fb = MomPoly::zero(k);
    let mut psib = MomPoly::zero(k);
    for ((mono, deg), part) in parts {
        let fail = || obstructed(b, &lift(&part), "no polynomial solution");
        if deg == 0 {
            return Err(fail());
        }
        let f_monos = monomials_of_degree(k, deg - 1);
        let psi_monos = if deg >= 2 { monomials_of_degree(k, deg - 2) } else { Vec::new() };
        let rows = monomials_of_degree(k, deg);
        let ncols = f_monos.len() + psi_monos.len();

        let mut eq = Matrix::zeros(rows.len(), ncols);
        for (col, e) in f_monos.iter().enumerate() {
            let prod = bj.mul(&Poly::from_terms(k, [(e.clone(), rat(1, 1))]));
            for (row, re) in rows.iter().enumerate() {
                eq[(row, col)] = prod.coefficient(re);
            }
        }
        for (i, e) in psi_monos.iter().enumerate() {
            let prod = jr.mul(&Poly::from_terms(k, [(e.clone(), rat(-1, 1))]));
            for (row, re) in rows.iter().enumerate() {
                eq[(row, f_monos.len() + i)] = prod.coefficient(re);
            }
        }
        let rhs: Vec<Rational> = rows.iter().map(|e| part.coefficient(e)).collect();

        // terminal conditions ψ + (𝐝 + 𝐰)·∇F = 0 for every shift
        let mut term_rows: Vec<Vec<Rational>> = Vec::new();
        if !psi_monos.is_empty() {
            for (shift, _) in shifts {
                let mut block = vec![vec![Rational::zero(); ncols]; psi_monos.len()];
                for (col, e) in f_monos.iter().enumerate() {
                    let dv = Poly::<Rational>::from_terms(k, [(e.clone(), rat(1, 1))]).directional(&shift.0);
                    for (row, re) in psi_monos.iter().enumerate() {
                        block[row][col] = dv.coefficient(re);
                    }
                }
                for (i, row) in block.iter_mut().enumerate() {
                    row[f_monos.len() + i] = rat(1, 1);
                }
                term_rows.extend(block);
            }
        }
        let mut full_rows: Vec<Vec<Rational>> = (0..rows.len()).map(|i| eq.row(i).to_vec()).collect();
        full_rows.extend(term_rows.iter().cloned());
        let mut full_rhs = rhs.clone();
        full_rhs.extend(std::iter::repeat_n(Rational::zero(), term_rows.len()));

        let (f_part, psi_part) = if let Some(sol) = solve(&Matrix::from_rows(&full_rows), &full_rhs) {
            assemble(k, &f_monos, &psi_monos, &sol.particular)
        } else {
            let sol = solve(&eq, &rhs).ok_or_else(fail)?;
            let (f0, psi0) = assemble(k, &f_monos, &psi_monos, &sol.particular);
            let (g, rem) = f0.div_rem(&jr).expect("J has a rational leading coefficient");
            (rem, psi0.sub(&bj.mul(&g)))
        };
        let lift_mono = |p: &Poly<Rational>| p.map_coefficients(|q| LaurentScalar::monomial(q.clone(), mono.clone()));
        fb = fb.add(&lift_mono(&f_part));
        psib = psib.add(&lift_mono(&psi_part));
    }
    Ok((fb, psib))
}

fn assemble(
    k: usize,
    f_monos: &[Vec<u32>],
    psi_monos: &[Vec<u32>],
    x: &[Rational],
) -> (Poly<Rational>, Poly<Rational>) {
    let f = Poly::from_terms(k, f_monos.iter().cloned().zip(x.iter().cloned()));
    let psi = Poly::from_terms(k, psi_monos.iter().cloned().zip(x[f_monos.len()..].iter().cloned()));
    (f, psi)
}

/// Largest `|F(t) − F(0)|` along `points` with `s = √E` from `params`.
pub fn integral_drift(
    orbit: &OrbitData,
    params: &Params,
    f: &ExpPolySum,
    points: &[PhasePoint],
) -> Result<f64, IntegralError> {
    let k = orbit.r() + 1;
    if f.nvars() != k {
        return Err(IntegralError::DimensionMismatch { expected: k, got: f.nvars() });
    }
    let uses_params = f.terms().any(|(_, p)| p.terms().any(|(_, c)| !c.params().is_empty()));
    if uses_params {
        return Err(IntegralError::UnresolvedParameters);
    }
    let symbols = [params.e.max(0.0).sqrt()];
    let Some(first) = points.first() else { return Ok(0.0) };
    let f0 = f.eval(first, &symbols);
    Ok(points.iter().map(|p| (f.eval(p, &symbols) - f0).abs()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn mp(text: &str) -> MomPoly {
        parse_poly(text, &["p", "phi"]).unwrap()
    }

    fn v(x: &[i64]) -> ExtVector {
        ExtVector::from_ints(x)
    }

    #[test]
    fn canonical_pair() {
        let eq = ExpPolySum::monomial(v(&[1, 0]), MomPoly::one(2));
        let p = ExpPolySum::monomial(v(&[0, 0]), MomPoly::var(2, 0));
        assert_eq!(poisson_bracket(&eq, &p).unwrap(), eq);
        let h = steady_hamiltonian(&OrbitData::sphere(3));
        assert!(poisson_bracket(&h, &h).unwrap().is_empty());
    }

    #[test]
    fn example_one_dimensional() {
        let o = OrbitData::sphere(1);
        let seed = Seed { c: v(&[0, 1]), f_c: mp("p + phi"), psi_c: mp("1") };
        let cert = recursion_solve(&o, &seed, 3).unwrap();
        assert!(cert.is_valid());
        assert!(!cert.trivial);
        assert_eq!(cert.f, ExpPolySum::monomial(v(&[0, 1]), mp("p + phi")));
        assert_eq!(cert.phi, ExpPolySum::monomial(v(&[0, 1]), mp("1/2")));
    }

    #[test]
    fn example_four_dimensional() {
        let o = OrbitData::sphere(4);
        let seed = Seed { c: v(&[-3, 1]), f_c: mp("-1/4*(p + phi)^2"), psi_c: mp("1/2*(p + phi)") };
        let cert = recursion_solve(&o, &seed, 4).unwrap();
        assert!(cert.is_valid());
        let expected = ExpPolySum::from_terms(2, [(v(&[-3, 1]), mp("-1/4*(p + phi)^2")), (v(&[1, -1]), mp("s^2"))]);
        assert_eq!(cert.f, expected);
        assert!(cert.phi.is_empty());
        assert_eq!(cert.levels_used, 1);
        assert_eq!(cert.f.to_string(), "s^2*exp(q - u) + (-1/4*p^2 - 1/2*p*phi - 1/4*phi^2)*exp(-3*q + u)");
    }

    #[test]
    fn trivial_seed_is_flagged() {
        let o = OrbitData::sphere(4);
        let j = j_poly(&o);
        let c = v(&[-1, 1]);
        let g = mp("p - 2*phi");
        let seed = Seed { c: c.clone(), f_c: j.mul(&g), psi_c: grad_along(&j, &c).mul(&g) };
        let cert = recursion_solve(&o, &seed, 2).unwrap();
        assert!(cert.trivial);
        assert!(cert.is_valid());
        assert_eq!(cert.f.coefficient(&c), Some(&j.mul(&g)));
    }

    #[test]
    fn bad_seed_is_obstructed() {
        let o = OrbitData::sphere(4);
        let seed = Seed { c: v(&[-3, 1]), f_c: mp("p"), psi_c: mp("1") };
        assert!(matches!(recursion_solve(&o, &seed, 2), Err(IntegralError::RecursionObstructed { .. })));
    }
}
