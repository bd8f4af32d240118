//! First-order subsystem `𝐪̇ = 2 e^{−½𝐝·𝐪} J ∇f` induced by a superpotential.

use super::{ExpSum, SuperpotentialError};
use crate::algebra::laurent::symbol_name;
use crate::dynamics::{PhasePoint, EXP_LIMIT};
use crate::orbit::{LorentzForm, OrbitData};

#[derive(Clone, Debug)]
pub struct FirstOrderField {
    orbit: OrbitData,
    e: f64,
    form: LorentzForm,
    d_ext: Vec<f64>,
    f: ExpSum,
    symbols: Vec<f64>,
}

/// Builds the field for `E = e_value` (`s = √E`) and numeric values of any
/// free parameters (`a, b, …` in order).
pub fn first_order_subsystem(
    orbit: &OrbitData,
    f: &ExpSum,
    e_value: f64,
    params: &[f64],
) -> Result<FirstOrderField, SuperpotentialError> {
    let uses_s = f.terms().any(|(_, c)| c.terms().any(|(m, _)| m.exponent(0) != 0));
    if uses_s && !(e_value > 0.0) {
        return Err(SuperpotentialError::BadEnergy(e_value));
    }
    let mut needed: Vec<usize> = f.terms().flat_map(|(_, c)| c.params()).collect();
    needed.sort();
    needed.dedup();
    if let Some(&max) = needed.last() {
        if max > params.len() {
            return Err(SuperpotentialError::UnresolvedParameters(needed.into_iter().map(symbol_name).collect()));
        }
    }
    let mut symbols = vec![e_value.max(0.0).sqrt()];
    symbols.extend_from_slice(params);
    Ok(FirstOrderField {
        orbit: orbit.clone(),
        e: e_value,
        form: orbit.lorentz(),
        d_ext: orbit.d_ext().to_f64(),
        f: f.clone(),
        symbols,
    })
}

impl FirstOrderField {
    pub fn dim(&self) -> usize {
        self.d_ext.len()
    }

    pub fn orbit(&self) -> &OrbitData {
        &self.orbit
    }

    pub fn energy(&self) -> f64 {
        self.e
    }

    pub fn superpotential(&self) -> &ExpSum {
        &self.f
    }

    pub fn symbols(&self) -> &[f64] {
        &self.symbols
    }

    /// `(q̇, u̇)` at `qe = (q, u)`; `None` past the overflow guard.
    pub fn eval(&self, qe: &[f64]) -> Option<Vec<f64>> {
        let dq: f64 = self.d_ext.iter().zip(qe).map(|(a, b)| a * b).sum();
        if !(dq.abs() <= 2.0 * EXP_LIMIT) {
            return None;
        }
        let grad = self.f.gradient_eval(qe, &self.symbols);
        let scale = 2.0 * (-0.5 * dq).exp();
        let v: Vec<f64> = self.form.apply_f64(&grad).into_iter().map(|x| scale * x).collect();
        v.iter().all(|x| x.is_finite()).then_some(v)
    }

    /// Phase-space lift `p = ∂f/∂q`, `φ = ∂f/∂u`.
    pub fn lift(&self, qe: &[f64]) -> PhasePoint {
        let g = self.f.gradient_eval(qe, &self.symbols);
        let r = qe.len() - 1;
        PhasePoint { q: qe[..r].to_vec(), u: qe[r], p: g[..r].to_vec(), phi: g[r] }
    }

    pub fn value(&self, qe: &[f64]) -> f64 {
        self.f.eval(qe, &self.symbols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_laurent;
    use crate::algebra::rat;
    use crate::orbit::ExtVector;

    #[test]
    fn bryant_field_matches_closed_form() {
        let f = ExpSum::from_terms([
            (ExtVector(vec![rat(2, 1), rat(-1, 1)]), parse_laurent("2*s").unwrap()),
            (ExtVector(vec![rat(1, 1), rat(-1, 1)]), parse_laurent("12/s").unwrap()),
        ]);
        let field = first_order_subsystem(&OrbitData::sphere(4), &f, 2.0, &[]).unwrap();
        let (q, u) = (0.3, -0.2);
        let v = field.eval(&[q, u]).unwrap();
        let se = 2f64.sqrt();
        assert!((v[0] - 6.0 / se * (-q).exp()).abs() < 1e-13);
        assert!((v[1] - (-se + 6.0 / se * (-q).exp())).abs() < 1e-13);
        assert!(first_order_subsystem(&OrbitData::sphere(4), &f, 0.0, &[]).is_err());
    }

    #[test]
    fn circle_field() {
        let f = ExpSum::from_terms([
            (ExtVector(vec![rat(1, 1), rat(-1, 1)]), parse_laurent("a").unwrap()),
            (ExtVector(vec![rat(0, 1), rat(-1, 1)]), parse_laurent("s^2/a").unwrap()),
        ]);
        let o = OrbitData::circle();
        assert!(first_order_subsystem(&o, &f, 2.0, &[]).is_err());
        let field = first_order_subsystem(&o, &f, 2.0, &[1.5]).unwrap();
        let (q, u) = (0.4, 0.1);
        let v = field.eval(&[q, u]).unwrap();
        let expect_q = -1.5 * (0.5 * q).exp() + 2.0 / 1.5 * (-0.5 * q).exp();
        assert!((v[0] - expect_q).abs() < 1e-13);
        assert!((v[1] + 1.5 * (0.5 * q).exp()).abs() < 1e-13);
    }
}
