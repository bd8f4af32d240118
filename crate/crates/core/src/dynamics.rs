//! Hamiltonian, Legendre maps, canonical vector field and the soliton
//! residual equations for multiplicity-free principal orbits.
//!
//! With `a = u − ½ d·q` and `λ = −ε`:
//!
//! ```text
//! H = (1/τ) e^{a} J(p, φ) + e^{−a} (−E + λ(n + 1 − u) − τ S(q))
//! ```
//!
//! The steady case (`ε = 0`, `τ = 1`) reduces to
//! `H = e^{−½𝐝·𝐪} J(𝐩) − e^{½𝐝·𝐪}(E + Σ A_w e^{𝐰·𝐪})`.

use thiserror::Error;

use crate::algebra::to_f64;
use crate::orbit::{LorentzForm, OrbitData};

/// Largest exponent fed to `exp` before evaluation is refused.
pub const EXP_LIMIT: f64 = 700.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("exponent {exponent:.3} exceeds the overflow guard")]
    OverflowGuard { exponent: f64 },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Soliton parameters. `C = −(E + (ε/2)(n + 3))` is kept in step with `E`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub tau: f64,
    pub epsilon: f64,
    pub e: f64,
    pub c: f64,
}

impl Params {
    pub fn new(n: u32, tau: f64, epsilon: f64, e: f64) -> Result<Self, DynamicsError> {
        if tau == 0.0 || !tau.is_finite() {
            return Err(DynamicsError::BadParams("tau must be finite and nonzero".into()));
        }
        if !epsilon.is_finite() || !e.is_finite() {
            return Err(DynamicsError::BadParams("epsilon and E must be finite".into()));
        }
        let c = -(e + 0.5 * epsilon * (n as f64 + 3.0));
        Ok(Params { tau, epsilon, e, c })
    }

    /// Steady parameters `τ = 1, ε = 0`.
    pub fn steady(e: f64) -> Self {
        Params { tau: 1.0, epsilon: 0.0, e, c: -e }
    }

    /// Parameters given through `C` instead of `E`.
    pub fn from_c(n: u32, tau: f64, epsilon: f64, c: f64) -> Result<Self, DynamicsError> {
        let e = -c - 0.5 * epsilon * (n as f64 + 3.0);
        Self::new(n, tau, epsilon, e)
    }

    /// Both `E` and `C` supplied; rejected unless they agree.
    pub fn with_both(n: u32, tau: f64, epsilon: f64, e: f64, c: f64) -> Result<Self, DynamicsError> {
        let p = Self::new(n, tau, epsilon, e)?;
        let scale = 1.0 + e.abs().max(c.abs());
        if (p.c - c).abs() > 1e-12 * scale {
            return Err(DynamicsError::BadParams(format!(
                "C = {c} is inconsistent with E = {e}; expected C = {}",
                p.c
            )));
        }
        Ok(p)
    }

    pub fn lambda(&self) -> f64 {
        -self.epsilon
    }
}

/// Point `(q, u, p, φ)` of momentum phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub q: Vec<f64>,
    pub u: f64,
    pub p: Vec<f64>,
    pub phi: f64,
}

impl PhasePoint {
    /// Flat layout `[q_1 … q_r, u, p_1 … p_r, φ]`.
    pub fn to_state(&self) -> Vec<f64> {
        let mut s = self.q.clone();
        s.push(self.u);
        s.extend_from_slice(&self.p);
        s.push(self.phi);
        s
    }

    pub fn from_state(state: &[f64]) -> Self {
        let r = state.len() / 2 - 1;
        PhasePoint { q: state[..r].to_vec(), u: state[r], p: state[r + 1..2 * r + 1].to_vec(), phi: state[2 * r + 1] }
    }

    pub fn is_finite(&self) -> bool {
        self.to_state().iter().all(|x| x.is_finite())
    }
}

/// Point `(q, u, q̇, u̇)` of velocity phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityPoint {
    pub q: Vec<f64>,
    pub u: f64,
    pub qdot: Vec<f64>,
    pub udot: f64,
}

/// Configuration with first and second derivatives at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSample {
    pub q: Vec<f64>,
    pub u: f64,
    pub qdot: Vec<f64>,
    pub udot: f64,
    pub qddot: Vec<f64>,
    pub uddot: f64,
}

impl CurveSample {
    pub fn velocity(&self) -> VelocityPoint {
        VelocityPoint { q: self.q.clone(), u: self.u, qdot: self.qdot.clone(), udot: self.udot }
    }
}

/// Partial derivatives of the Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianGradient {
    pub dq: Vec<f64>,
    pub du: f64,
    pub dp: Vec<f64>,
    pub dphi: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrsResiduals {
    pub res3: Vec<f64>,
    pub res4: f64,
    pub res7: f64,
}

impl GrsResiduals {
    pub fn max_abs(&self) -> f64 {
        self.res3.iter().fold(self.res4.abs().max(self.res7.abs()), |m, x| m.max(x.abs()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Conservation {
    /// Mean curvature of the dilaton volume, `−u̇ + tr L`.
    pub xi: f64,
    /// `C + εu`.
    pub ee: f64,
    pub res8: f64,
    /// `ü + ξu̇ − εu − C`.
    pub res6: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmbientCurvature {
    pub via10: f64,
    pub via11: f64,
    pub via12: f64,
}

/// Orbit and parameters with float caches for repeated evaluation.
#[derive(Clone, Debug)]
pub struct Dynamics {
    pub orbit: OrbitData,
    pub params: Params,
    form: LorentzForm,
    d: Vec<f64>,
    n: f64,
    weights: Vec<(Vec<f64>, f64)>,
}

fn guarded_exp(x: f64) -> Result<f64, DynamicsError> {
    if !(x.abs() <= EXP_LIMIT) {
        return Err(DynamicsError::OverflowGuard { exponent: x });
    }
    Ok(x.exp())
}

impl Dynamics {
    pub fn new(orbit: &OrbitData, params: Params) -> Self {
        Dynamics {
            form: orbit.lorentz(),
            d: orbit.d().iter().map(|&x| x as f64).collect(),
            n: orbit.n() as f64,
            weights: orbit.weights().iter().map(|w| (w.w.iter().map(to_f64).collect(), to_f64(&w.a))).collect(),
            orbit: orbit.clone(),
            params,
        }
    }

    pub fn r(&self) -> usize {
        self.d.len()
    }

    pub fn form(&self) -> &LorentzForm {
        &self.form
    }

    fn check(&self, q: &[f64]) -> Result<(), DynamicsError> {
        if q.len() != self.r() {
            return Err(DynamicsError::DimensionMismatch { expected: self.r(), got: q.len() });
        }
        Ok(())
    }

    /// `a = u − ½ d·q`.
    fn a(&self, q: &[f64], u: f64) -> f64 {
        u - 0.5 * self.d.iter().zip(q).map(|(d, q)| d * q).sum::<f64>()
    }

    pub fn scalar_curvature(&self, q: &[f64]) -> f64 {
        self.weights.iter().map(|(w, a)| a * dot(w, q).exp()).sum()
    }

    pub fn s_gradient(&self, q: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.r()];
        for (w, a) in &self.weights {
            let e = a * dot(w, q).exp();
            for (gi, wi) in g.iter_mut().zip(w) {
                *gi += wi * e;
            }
        }
        g
    }

    /// `r_i = −(1/d_i) ∂S/∂q_i`.
    pub fn ricci_eigenvalues(&self, q: &[f64]) -> Vec<f64> {
        self.s_gradient(q).iter().zip(&self.d).map(|(g, d)| -g / d).collect()
    }

    pub fn legendre_forward(&self, v: &VelocityPoint) -> Result<PhasePoint, DynamicsError> {
        self.check(&v.q)?;
        let scale = self.params.tau * guarded_exp(-self.a(&v.q, v.u))?;
        let dq: f64 = dot(&self.d, &v.qdot);
        let p =
            self.d.iter().zip(&v.qdot).map(|(dj, qj)| scale * (0.5 * dq * dj - 0.5 * dj * qj - v.udot * dj)).collect();
        let phi = scale * (2.0 * v.udot - dq);
        Ok(PhasePoint { q: v.q.clone(), u: v.u, p, phi })
    }

    pub fn legendre_inverse(&self, pt: &PhasePoint) -> Result<VelocityPoint, DynamicsError> {
        self.check(&pt.q)?;
        let scale = guarded_exp(self.a(&pt.q, pt.u))? / self.params.tau;
        let phi = pt.phi * scale;
        let qdot = pt.p.iter().zip(&self.d).map(|(p, d)| -phi - 2.0 * p * scale / d).collect();
        let sum_p: f64 = pt.p.iter().sum::<f64>() * scale;
        let udot = -(sum_p + 0.5 * (self.n - 1.0) * phi);
        Ok(VelocityPoint { q: pt.q.clone(), u: pt.u, qdot, udot })
    }

    fn momentum(pt: &PhasePoint) -> Vec<f64> {
        let mut v = pt.p.clone();
        v.push(pt.phi);
        v
    }

    /// `−E + λ(n + 1 − u) − τ S`.
    fn potential(&self, q: &[f64], u: f64) -> f64 {
        let p = &self.params;
        -p.e + p.lambda() * (self.n + 1.0 - u) - p.tau * self.scalar_curvature(q)
    }

    fn check_weights(&self, q: &[f64], a: f64) -> Result<(), DynamicsError> {
        for (w, _) in &self.weights {
            let x = dot(w, q) - a;
            if !(x.abs() <= EXP_LIMIT) {
                return Err(DynamicsError::OverflowGuard { exponent: x });
            }
        }
        Ok(())
    }

    pub fn hamiltonian(&self, pt: &PhasePoint) -> Result<f64, DynamicsError> {
        self.check(&pt.q)?;
        let a = self.a(&pt.q, pt.u);
        self.check_weights(&pt.q, a)?;
        let j = self.form.quadratic_f64(&Self::momentum(pt));
        Ok(guarded_exp(a)? * j / self.params.tau + guarded_exp(-a)? * self.potential(&pt.q, pt.u))
    }

    /// Steady form evaluated directly from the extended-vector expression.
    pub fn hamiltonian_steady(&self, pt: &PhasePoint) -> Result<f64, DynamicsError> {
        self.check(&pt.q)?;
        let mut qq = pt.q.clone();
        qq.push(pt.u);
        let dq = self.orbit.d_ext().dot_f64(&qq);
        let j = self.form.quadratic_f64(&Self::momentum(pt));
        let mut bracket = self.params.e;
        for w in self.orbit.weights() {
            bracket += to_f64(&w.a) * w.extended().dot_f64(&qq).exp();
        }
        Ok(guarded_exp(-0.5 * dq)? * j - guarded_exp(0.5 * dq)? * bracket)
    }

    pub fn hamiltonian_gradient(&self, pt: &PhasePoint) -> Result<HamiltonianGradient, DynamicsError> {
        self.check(&pt.q)?;
        let tau = self.params.tau;
        let a = self.a(&pt.q, pt.u);
        self.check_weights(&pt.q, a)?;
        let (ep, em) = (guarded_exp(a)?, guarded_exp(-a)?);
        let mom = Self::momentum(pt);
        let j = self.form.quadratic_f64(&mom);
        let v = self.potential(&pt.q, pt.u);
        let ds = self.s_gradient(&pt.q);
        let dq = self
            .d
            .iter()
            .zip(&ds)
            .map(|(d, dsi)| -0.5 * d * ep * j / tau + 0.5 * d * em * v - em * tau * dsi)
            .collect();
        let du = ep * j / tau - em * v - em * self.params.lambda();
        let bp = self.form.apply_f64(&mom);
        let mut dp: Vec<f64> = bp.iter().map(|x| 2.0 * ep * x / tau).collect();
        let dphi = dp.pop().expect("momentum has r + 1 slots");
        Ok(HamiltonianGradient { dq, du, dp, dphi })
    }

    /// Canonical field `(q̇, u̇, ṗ, φ̇) = (∂H/∂p, ∂H/∂φ, −∂H/∂q, −∂H/∂u)` on the flat state.
    pub fn vector_field(&self, state: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        let r = self.r();
        if state.len() != 2 * r + 2 {
            return Err(DynamicsError::DimensionMismatch { expected: 2 * r + 2, got: state.len() });
        }
        let g = self.hamiltonian_gradient(&PhasePoint::from_state(state))?;
        let mut out = g.dp;
        out.push(g.dphi);
        out.extend(g.dq.iter().map(|x| -x));
        out.push(-g.du);
        Ok(out)
    }

    fn traces(&self, qdot: &[f64]) -> (f64, f64) {
        let tr_l = 0.5 * dot(&self.d, qdot);
        let tr_l2 = 0.25 * self.d.iter().zip(qdot).map(|(d, x)| d * x * x).sum::<f64>();
        (tr_l, tr_l2)
    }

    pub fn grs_residuals(&self, s: &CurveSample) -> GrsResiduals {
        let eps = self.params.epsilon;
        let (tr_l, tr_l2) = self.traces(&s.qdot);
        let tr_ldot = 0.5 * dot(&self.d, &s.qddot);
        let ricci = self.ricci_eigenvalues(&s.q);
        let res3 = (0..self.r())
            .map(|i| {
                let l = 0.5 * s.qdot[i];
                let ldot = 0.5 * s.qddot[i];
                ricci[i] - ldot - (tr_l - s.udot) * l + 0.5 * eps
            })
            .collect();
        let res4 = -tr_l2 - tr_ldot + s.uddot + 0.5 * eps;
        let xi = -s.udot + tr_l;
        let res7 =
            self.scalar_curvature(&s.q) + tr_l2 - xi * xi + 0.5 * (self.n - 1.0) * eps - self.params.c - eps * s.u;
        GrsResiduals { res3, res4, res7 }
    }

    /// `ü − tr L̇ − tr L² − λ/(2τ)`, the reduced Euler–Lagrange form of the normal equation.
    pub fn normal_equation_reduced(&self, s: &CurveSample) -> f64 {
        let (_, tr_l2) = self.traces(&s.qdot);
        let tr_ldot = 0.5 * dot(&self.d, &s.qddot);
        s.uddot - tr_ldot - tr_l2 - self.params.lambda() / (2.0 * self.params.tau)
    }

    pub fn conservation_quantities(&self, s: &CurveSample) -> Conservation {
        let eps = self.params.epsilon;
        let c = self.params.c;
        let (tr_l, _) = self.traces(&s.qdot);
        let xi = -s.udot + tr_l;
        let ee = c + eps * s.u;
        let res8 = eps * s.uddot + xi * eps * s.udot - eps * ee;
        let res6 = s.uddot + xi * s.udot - eps * s.u - c;
        Conservation { xi, ee, res8, res6 }
    }

    pub fn ambient_scalar_curvature(&self, s: &CurveSample) -> AmbientCurvature {
        let eps = self.params.epsilon;
        let (tr_l, tr_l2) = self.traces(&s.qdot);
        let tr_ldot = 0.5 * dot(&self.d, &s.qddot);
        let sc = self.scalar_curvature(&s.q);
        AmbientCurvature {
            via10: -2.0 * tr_ldot - tr_l2 - tr_l * tr_l + sc,
            via11: -sc + tr_l * tr_l - tr_l2 - 2.0 * s.udot * tr_l - eps * self.n,
            via12: -self.params.c - eps * s.u - s.udot * s.udot - 0.5 * eps * (self.n + 1.0),
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
