//! Closed-form steady solitons: Bryant-type solutions in dimension five,
//! warped products over `S² × S²`, and the two-dimensional families.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::jet::Jet;
use super::FlowError;
use crate::dynamics::{CurveSample, Dynamics, Params, PhasePoint};
use crate::orbit::OrbitData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CatalogId {
    Bryant5Conical,
    Bryant5Smooth,
    Bryant5SingularNegmu,
    Bryant5Posmu,
    WarpedSmooth,
    WarpedSmoothSwapped,
    WarpedSpecial,
    Cigar,
    Cylinder,
    FlatCone,
    Exploding,
}

impl CatalogId {
    pub const ALL: [CatalogId; 11] = [
        CatalogId::Bryant5Conical,
        CatalogId::Bryant5Smooth,
        CatalogId::Bryant5SingularNegmu,
        CatalogId::Bryant5Posmu,
        CatalogId::WarpedSmooth,
        CatalogId::WarpedSmoothSwapped,
        CatalogId::WarpedSpecial,
        CatalogId::Cigar,
        CatalogId::Cylinder,
        CatalogId::FlatCone,
        CatalogId::Exploding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CatalogId::Bryant5Conical => "bryant5-conical",
            CatalogId::Bryant5Smooth => "bryant5-smooth",
            CatalogId::Bryant5SingularNegmu => "bryant5-singular-negmu",
            CatalogId::Bryant5Posmu => "bryant5-posmu",
            CatalogId::WarpedSmooth => "warped-smooth",
            CatalogId::WarpedSmoothSwapped => "warped-smooth-swapped",
            CatalogId::WarpedSpecial => "warped-special",
            CatalogId::Cigar => "cigar",
            CatalogId::Cylinder => "cylinder",
            CatalogId::FlatCone => "flat-cone",
            CatalogId::Exploding => "exploding",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CatalogId::Bryant5Conical => "h^2 = (6/sqrt(E))(t+t0), conical at t = -t0",
            CatalogId::Bryant5Smooth => "smooth Bryant soliton in dimension 5 (mu < 0, t0 = t1 = 0)",
            CatalogId::Bryant5SingularNegmu => "mu < 0 with t1 > 0, h blows up like 1/sqrt(t)",
            CatalogId::Bryant5Posmu => "mu > 0, h(0) = 0 and h'(0) = +infinity",
            CatalogId::WarpedSmooth => "S^2 x S^2 warped product, h1 collapses at t = 0",
            CatalogId::WarpedSmoothSwapped => "warped product with h1 and h2 exchanged",
            CatalogId::WarpedSpecial => "h1^2 = h2^2 = (2/sqrt(E))(t+t0)",
            CatalogId::Cigar => "h = (sqrt(E)/a) tanh(sqrt(E)(t+t0)/2), smooth iff E = 2a",
            CatalogId::Cylinder => "h = sqrt(E)/a constant",
            CatalogId::FlatCone => "E = 0, h = (a/2)(t+t0), flat",
            CatalogId::Exploding => "E = 0, h = 2/(a(t+t0))",
        }
    }

    pub fn orbit(self) -> OrbitData {
        match self {
            CatalogId::Bryant5Conical
            | CatalogId::Bryant5Smooth
            | CatalogId::Bryant5SingularNegmu
            | CatalogId::Bryant5Posmu => OrbitData::sphere(4),
            CatalogId::WarpedSmooth | CatalogId::WarpedSmoothSwapped | CatalogId::WarpedSpecial => {
                OrbitData::warped(2, 2)
            }
            CatalogId::Cigar | CatalogId::Cylinder | CatalogId::FlatCone | CatalogId::Exploding => OrbitData::circle(),
        }
    }

    /// Families defined only for `E = 0`.
    pub fn zero_energy(self) -> bool {
        matches!(self, CatalogId::FlatCone | CatalogId::Exploding)
    }

    /// Factor whose `h` vanishes at the left end of the domain, if any.
    pub fn collapsing_index(self) -> Option<usize> {
        match self {
            CatalogId::WarpedSmoothSwapped => Some(1),
            CatalogId::Cylinder | CatalogId::Exploding | CatalogId::Bryant5SingularNegmu => None,
            _ => Some(0),
        }
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CatalogId {
    type Err = FlowError;
    fn from_str(s: &str) -> Result<Self, FlowError> {
        CatalogId::ALL.into_iter().find(|id| id.name() == s).ok_or_else(|| FlowError::UnknownCurve(s.to_string()))
    }
}

/// Family parameters; unused entries are ignored. `u_at_ref` fixes the
/// additive constant in `u` at `t = 1` (or one unit into the domain).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveParams {
    pub e: f64,
    pub t0: f64,
    pub t1: f64,
    pub a: Option<f64>,
    pub u_at_ref: f64,
}

impl CurveParams {
    pub fn with_energy(e: f64) -> Self {
        CurveParams { e, t0: 0.0, t1: 0.0, a: None, u_at_ref: 0.0 }
    }
}

impl Default for CurveParams {
    fn default() -> Self {
        Self::with_energy(1.0)
    }
}

#[derive(Clone, Debug)]
pub struct SolutionCurve {
    pub id: CatalogId,
    pub params: CurveParams,
    /// Open interval of definition.
    pub domain: (f64, f64),
    /// Domain ends where the metric degenerates or blows up.
    pub singular_at: Vec<f64>,
    orbit: OrbitData,
    a: f64,
    shift: f64,
    u_shift: f64,
    h_scale: Vec<f64>,
}

/// Unique positive root of `(√E/2) t tanh((√E/2) t) = 1` by bisection on
/// `[1e-6, 50/√E]`.
pub fn posmu_t0(e: f64) -> Result<f64, FlowError> {
    if !(e > 0.0) {
        return Err(FlowError::BadParams(format!("E must be positive, got {e}")));
    }
    let k = e.sqrt() / 2.0;
    let g = |t: f64| k * t * (k * t).tanh() - 1.0;
    let (mut lo, mut hi) = (1e-6, 50.0 / e.sqrt());
    while hi - lo > 1e-13 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    Ok(mid)
}

pub fn closed_form(id: CatalogId, params: CurveParams) -> Result<SolutionCurve, FlowError> {
    let p = params;
    let bad = |msg: String| Err(FlowError::BadParams(msg));
    if !p.e.is_finite() || !p.t0.is_finite() || !p.t1.is_finite() || !p.u_at_ref.is_finite() {
        return bad("parameters must be finite".into());
    }
    if id.zero_energy() {
        if p.e != 0.0 {
            return bad(format!("{id} requires E = 0, got {}", p.e));
        }
    } else if !(p.e > 0.0) {
        return bad(format!("{id} requires E > 0, got {}", p.e));
    }
    let a = match id {
        CatalogId::Cigar | CatalogId::Cylinder => p.a.unwrap_or(p.e / 2.0),
        CatalogId::FlatCone => p.a.unwrap_or(2.0),
        CatalogId::Exploding => p.a.unwrap_or(1.0),
        _ => 0.0,
    };
    if matches!(id, CatalogId::Cigar | CatalogId::Cylinder | CatalogId::FlatCone | CatalogId::Exploding) && !(a > 0.0) {
        return bad(format!("{id} requires a > 0, got {a}"));
    }
    let mut shift = 0.0;
    let lo = match id {
        CatalogId::Bryant5Smooth => 0.0,
        CatalogId::Bryant5SingularNegmu => {
            if !(p.t1 > 0.0) {
                return bad(format!("{id} requires t1 > 0, got {}", p.t1));
            }
            0.0
        }
        CatalogId::Bryant5Posmu => {
            shift = posmu_t0(p.e)?;
            0.0
        }
        CatalogId::WarpedSmooth | CatalogId::WarpedSmoothSwapped => (-p.t0).max(-p.t1),
        CatalogId::Cylinder => f64::NEG_INFINITY,
        _ => -p.t0,
    };
    let mut singular_at = Vec::new();
    if lo.is_finite() {
        singular_at.push(lo);
    }
    let mut curve = SolutionCurve {
        id,
        params: p,
        domain: (lo, f64::INFINITY),
        singular_at,
        orbit: id.orbit(),
        a,
        shift,
        u_shift: 0.0,
        h_scale: vec![1.0; id.orbit().r()],
    };
    let t_ref = curve.reference_time();
    let (_, u) = curve.raw(Jet::constant(t_ref));
    curve.u_shift = p.u_at_ref - u.v;
    Ok(curve)
}

impl SolutionCurve {
    pub fn orbit(&self) -> &OrbitData {
        &self.orbit
    }

    pub fn dynamics_params(&self) -> Params {
        Params::steady(self.params.e)
    }

    /// `a` actually used by the two-dimensional families.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Shift `t0` actually used (the computed root for `bryant5-posmu`).
    pub fn t0(&self) -> f64 {
        if self.id == CatalogId::Bryant5Posmu {
            self.shift
        } else {
            self.params.t0
        }
    }

    /// `t = 1`, or one unit into the domain when `1` lies outside it.
    pub fn reference_time(&self) -> f64 {
        if self.contains(1.0) {
            1.0
        } else {
            self.domain.0 + 1.0
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.domain.0 && t < self.domain.1
    }

    /// Copy with `h_index` multiplied by `factor` (not a solution unless `factor = 1`).
    pub fn perturbed(&self, index: usize, factor: f64) -> SolutionCurve {
        let mut c = self.clone();
        c.h_scale[index] *= factor;
        c
    }

    /// `(q_i, u)` jets before fixing the constant in `u`.
    fn raw(&self, t: Jet) -> (Vec<Jet>, Jet) {
        let p = &self.params;
        let e = p.e;
        let se = e.sqrt();
        match self.id {
            CatalogId::Bryant5Conical => {
                let tt = t + p.t0;
                let alpha = tt * (6.0 / se);
                (vec![alpha.ln()], -t * se + tt.ln())
            }
            CatalogId::Bryant5Smooth | CatalogId::Bryant5SingularNegmu => {
                let x = (t + p.t0) * (se / 2.0);
                let c = x.coth();
                // t coth x − 2/√E written as (2/√E)(x coth x − 1) plus the t1 part
                let inner = x.xcoth_m1() * (2.0 / se) + c * p.t1;
                let alpha = inner * (6.0 / se);
                let u = (c * c - 1.0).ln() + inner.ln();
                (vec![alpha.ln()], u)
            }
            CatalogId::Bryant5Posmu => {
                let tt = t + self.shift;
                let y = tt * (se / 2.0);
                let alpha = (tt * y.tanh() - 2.0 / se) * (6.0 / se);
                let u = y.ln_cosh() * -2.0 + alpha.ln();
                (vec![alpha.ln()], u)
            }
            CatalogId::WarpedSmooth | CatalogId::WarpedSmoothSwapped => {
                let tt = t + p.t0;
                let y = (t + p.t1) * (se / 2.0);
                let base = (tt * (2.0 / se)).ln();
                let q1 = base + y.tanh().ln();
                let q2 = base + y.coth().ln();
                let u = tt.ln() - ((t + p.t1) * se).ln_sinh();
                if self.id == CatalogId::WarpedSmooth {
                    (vec![q1, q2], u)
                } else {
                    (vec![q2, q1], u)
                }
            }
            CatalogId::WarpedSpecial => {
                let tt = t + p.t0;
                let q = (tt * (2.0 / se)).ln();
                (vec![q, q], -t * se + tt.ln())
            }
            CatalogId::Cigar => {
                let y = (t + p.t0) * (se / 2.0);
                let h = y.tanh() * (se / self.a);
                (vec![h.ln() * 2.0], y.ln_cosh() * -2.0)
            }
            CatalogId::Cylinder => {
                let h = se / self.a;
                (vec![Jet::constant(2.0 * h.ln())], -t * se)
            }
            CatalogId::FlatCone => {
                let h = (t + p.t0) * (self.a / 2.0);
                (vec![h.ln() * 2.0], Jet::constant(0.0))
            }
            CatalogId::Exploding => {
                let tt = t + p.t0;
                let h = tt.recip() * (2.0 / self.a);
                (vec![h.ln() * 2.0], tt.ln() * -2.0)
            }
        }
    }

    fn check(&self, t: f64) -> Result<(), FlowError> {
        if !self.contains(t) {
            return Err(FlowError::OutOfDomain { t, lo: self.domain.0, hi: self.domain.1 });
        }
        Ok(())
    }

    /// `q_i = 2 log h_i` and `u` as jets.
    pub fn jets(&self, t: f64) -> Result<(Vec<Jet>, Jet), FlowError> {
        self.check(t)?;
        let (mut q, u) = self.raw(Jet::var(t));
        for (qi, s) in q.iter_mut().zip(&self.h_scale) {
            *qi = *qi + 2.0 * s.ln();
        }
        let u = u + self.u_shift;
        if q.iter().chain([&u]).any(|j| !(j.v.is_finite() && j.d1.is_finite() && j.d2.is_finite())) {
            return Err(FlowError::OutOfDomain { t, lo: self.domain.0, hi: self.domain.1 });
        }
        Ok((q, u))
    }

    /// `h_i` with first and second derivatives.
    pub fn h(&self, t: f64) -> Result<Vec<Jet>, FlowError> {
        Ok(self.jets(t)?.0.into_iter().map(|q| (q * 0.5).exp()).collect())
    }

    pub fn u(&self, t: f64) -> Result<Jet, FlowError> {
        Ok(self.jets(t)?.1)
    }

    pub fn sample(&self, t: f64) -> Result<CurveSample, FlowError> {
        let (q, u) = self.jets(t)?;
        Ok(CurveSample {
            q: q.iter().map(|j| j.v).collect(),
            u: u.v,
            qdot: q.iter().map(|j| j.d1).collect(),
            udot: u.d1,
            qddot: q.iter().map(|j| j.d2).collect(),
            uddot: u.d2,
        })
    }

    /// Phase-space point through the Legendre map.
    pub fn phase_point(&self, t: f64) -> Result<PhasePoint, FlowError> {
        let s = self.sample(t)?;
        let dy = Dynamics::new(&self.orbit, self.dynamics_params());
        Ok(dy.legendre_forward(&s.velocity())?)
    }

    /// `e^{q−u}(E − (q̇ − u̇)²)` at the reference time, for the Bryant
    /// families; it scales with `e^{−u_at_ref}`.
    pub fn mu(&self) -> Option<f64> {
        if self.orbit.r() != 1 || self.orbit.n() != 4 {
            return None;
        }
        let s = self.sample(self.reference_time()).ok()?;
        let x = s.qdot[0] - s.udot;
        Some((s.q[0] - s.u).exp() * (self.params.e - x * x))
    }
}

/// The explicit β/α quadratures for the Bryant system in dimension five:
/// `β̇² = E − μe^{−β}`, `2β̇α̇ − μe^{−β}α = 12`, `u = −β + log α`, `h² = α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetaQuadrature {
    pub e: f64,
    pub mu: f64,
    pub t0: f64,
    pub t1: f64,
}

pub fn beta_quadrature(e: f64, mu: f64, t0: f64, t1: f64) -> Result<BetaQuadrature, FlowError> {
    if !(e > 0.0) || !mu.is_finite() {
        return Err(FlowError::BadParams(format!("need E > 0 and finite mu, got E = {e}, mu = {mu}")));
    }
    Ok(BetaQuadrature { e, mu, t0, t1 })
}

impl BetaQuadrature {
    pub fn beta(&self, t: Jet) -> Jet {
        let se = self.e.sqrt();
        let y = (t + self.t0) * (se / 2.0);
        if self.mu < 0.0 {
            // e^{−β} = (E/−μ) csch² y
            y.ln_sinh() * 2.0 - (self.e / -self.mu).ln()
        } else if self.mu > 0.0 {
            // e^{−β} = (E/μ) sech² y
            y.ln_cosh() * 2.0 - (self.e / self.mu).ln()
        } else {
            t * se
        }
    }

    pub fn alpha(&self, t: Jet) -> Jet {
        let se = self.e.sqrt();
        let tt = t + self.t0;
        let y = tt * (se / 2.0);
        if self.mu < 0.0 {
            ((tt + self.t1) * y.coth() - 2.0 / se) * (6.0 / se)
        } else if self.mu > 0.0 {
            ((tt + self.t1) * y.tanh() - 2.0 / se) * (6.0 / se)
        } else {
            (tt + self.t1) * (6.0 / se)
        }
    }

    pub fn u(&self, t: Jet) -> Jet {
        -self.beta(t) + self.alpha(t).ln()
    }

    pub fn sample(&self, t: f64) -> CurveSample {
        let q = self.alpha(Jet::var(t)).ln();
        let u = self.u(Jet::var(t));
        CurveSample { q: vec![q.v], u: u.v, qdot: vec![q.d1], udot: u.d1, qddot: vec![q.d2], uddot: u.d2 }
    }
}

/// Scalar curvature of the smooth warped soliton with `t0 = t1 = 0`, as an
/// explicit function of `t`.
pub fn warped_smooth_scalar_curvature(e: f64, t: f64) -> f64 {
    let se = e.sqrt();
    let m = (2.0 * se * t).exp_m1();
    2.0 * se / t - 1.0 / (t * t) - 4.0 * se / m * (se - 1.0 / t) - 4.0 * e / (m * m)
}
