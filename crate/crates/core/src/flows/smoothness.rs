//! One-sided limits at the singular orbit and the smoothness verdict
//! `h_k(0) = 0, ḣ_k(0) = 1, u̇(0) = 0`, `h_j(0) > 0, ḣ_j(0) = 0` for `j ≠ k`.

use serde::Serialize;

use super::catalog::SolutionCurve;
use super::FlowError;

/// Offsets `2^{−k}·10^{−2}`, `k = 0..3`, from the singular end.
pub const LIMIT_STEPS: [f64; 4] = [1e-2, 5e-3, 2.5e-3, 1.25e-3];

const TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Limit {
    /// Extrapolated value with the leading exponent `γ` of `g(t) − g(0) ~ t^γ`.
    Finite { value: f64, order: f64 },
    /// `|g| ~ t^{exponent}` with `exponent < 0`.
    Blowup { exponent: f64, sign: f64 },
}

impl Limit {
    pub fn value(&self) -> Option<f64> {
        match self {
            Limit::Finite { value, .. } => Some(*value),
            Limit::Blowup { .. } => None,
        }
    }
}

/// Richardson extrapolation of `g(lo⁺)` from samples at `lo + LIMIT_STEPS`.
/// The leading exponent is measured from successive differences (and
/// snapped to a multiple of ½ when close); the table then eliminates
/// `t^γ, t^{γ+1}, t^{γ+2}`.
pub fn one_sided_limit(values: [f64; 4]) -> Limit {
    let d: Vec<f64> = values.windows(2).map(|w| w[0] - w[1]).collect();
    let scale = 1.0 + values[3].abs();
    if d.iter().all(|x| x.abs() <= 1e-13 * scale) {
        return Limit::Finite { value: values[3], order: f64::INFINITY };
    }
    let mut gamma =
        if d[1] != 0.0 && d[2] != 0.0 && d[1].signum() == d[2].signum() { (d[1] / d[2]).log2() } else { 1.0 };
    let snapped = (gamma * 2.0).round() / 2.0;
    if (gamma - snapped).abs() < 0.15 {
        gamma = snapped;
    }
    if gamma <= 0.05 {
        let exponent = -(values[3].abs() / values[2].abs()).log2();
        return Limit::Blowup { exponent, sign: values[3].signum() };
    }
    let mut table = values.to_vec();
    for j in 1..4 {
        let factor = 2f64.powf(gamma + (j - 1) as f64) - 1.0;
        for k in (j..4).rev() {
            table[k] = table[k] + (table[k] - table[k - 1]) / factor;
        }
    }
    Limit::Finite { value: table[3], order: gamma }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitCheck {
    pub quantity: String,
    pub limit: Limit,
    /// Required limit (`None` means "positive").
    pub expected: Option<f64>,
    pub ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Smooth,
    /// `h_k → 0` with a finite slope other than one.
    Conical,
    /// Some derivative or factor is unbounded at the singular orbit.
    Blowup,
    /// Other failures of the conditions.
    Singular,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessReport {
    pub at: f64,
    pub collapsing: usize,
    pub checks: Vec<LimitCheck>,
    pub verdict: Verdict,
}

impl SmoothnessReport {
    pub fn limit(&self, quantity: &str) -> Option<&Limit> {
        self.checks.iter().find(|c| c.quantity == quantity).map(|c| &c.limit)
    }
}

pub fn smoothness_check(curve: &SolutionCurve, collapsing: usize) -> Result<SmoothnessReport, FlowError> {
    let lo = curve.domain.0;
    if !lo.is_finite() {
        return Err(FlowError::BadParams(format!("{} has no finite singular end", curve.id)));
    }
    let r = curve.orbit().r();
    if collapsing >= r {
        return Err(FlowError::BadParams(format!("collapsing index {collapsing} out of range for {r} factors")));
    }
    let mut h = vec![[0.0; 4]; r];
    let mut hd = vec![[0.0; 4]; r];
    let mut ud = [0.0; 4];
    for (k, dt) in LIMIT_STEPS.iter().enumerate() {
        let t = lo + dt;
        let hs = curve.h(t)?;
        for i in 0..r {
            h[i][k] = hs[i].v;
            hd[i][k] = hs[i].d1;
        }
        ud[k] = curve.u(t)?.d1;
    }
    let check = |name: String, values: [f64; 4], expected: Option<f64>| {
        let limit = one_sided_limit(values);
        let ok = match (limit, expected) {
            (Limit::Finite { value, .. }, Some(e)) => (value - e).abs() < TOL,
            (Limit::Finite { value, .. }, None) => value > TOL,
            (Limit::Blowup { .. }, _) => false,
        };
        LimitCheck { quantity: name, limit, expected, ok }
    };
    let k = collapsing + 1;
    let mut checks = vec![
        check(format!("h{k}(0)"), h[collapsing], Some(0.0)),
        check(format!("h{k}'(0)"), hd[collapsing], Some(1.0)),
        check("u'(0)".into(), ud, Some(0.0)),
    ];
    for j in (0..r).filter(|&j| j != collapsing) {
        checks.push(check(format!("h{}(0)", j + 1), h[j], None));
        checks.push(check(format!("h{}'(0)", j + 1), hd[j], Some(0.0)));
    }
    let verdict = if checks.iter().all(|c| c.ok) {
        Verdict::Smooth
    } else if checks.iter().any(|c| matches!(c.limit, Limit::Blowup { .. })) {
        Verdict::Blowup
    } else if checks[0].ok && checks[1].limit.value().is_some() && checks[2..].iter().all(|c| c.ok) {
        Verdict::Conical
    } else {
        Verdict::Singular
    };
    Ok(SmoothnessReport { at: lo, collapsing, checks, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(f: impl Fn(f64) -> f64) -> [f64; 4] {
        LIMIT_STEPS.map(f)
    }

    #[test]
    fn extrapolates_power_series() {
        let l = one_sided_limit(sample(|t| 1.0 - 0.3 * t * t + 0.1 * t.powi(4)));
        assert!((l.value().unwrap() - 1.0).abs() < 1e-12);
        let l = one_sided_limit(sample(|t| 2.0 * t.sqrt() * (1.0 + 0.7 * t)));
        assert!(l.value().unwrap().abs() < 1e-10);
        let l = one_sided_limit(sample(|t| (t + 0.3).ln()));
        assert!((l.value().unwrap() - 0.3f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn detects_blowup() {
        match one_sided_limit(sample(|t| 3.0 / t.sqrt())) {
            Limit::Blowup { exponent, sign } => {
                assert!((exponent + 0.5).abs() < 1e-12);
                assert_eq!(sign, 1.0);
            }
            other => panic!("{other:?}"),
        }
    }
}
