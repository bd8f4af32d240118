//! Integration of the canonical flow and of first-order subsystems.

use std::io::{self, Write};

use super::integrator::{dopri5, dopri5_monitored, IntegratorOptions, IntegratorStats, StopReason};
use super::FlowError;
use crate::dynamics::{Dynamics, Params, PhasePoint, EXP_LIMIT};
use crate::integrals::ExpPolySum;
use crate::orbit::OrbitData;
use crate::superpotential::FirstOrderField;

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<PhasePoint>,
    /// `𝓗` at every sample (`NaN` where it cannot be evaluated).
    pub hamiltonian: Vec<f64>,
    /// Registered conserved quantities, one value per sample.
    pub conserved: Vec<(String, Vec<f64>)>,
    pub stats: IntegratorStats,
    pub stop: StopReason,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &PhasePoint)> {
        Some((*self.times.last()?, self.points.last()?))
    }

    /// Adds a column with `F` evaluated at every sample.
    pub fn register(&mut self, name: &str, f: &ExpPolySum, symbols: &[f64]) {
        let values = self.points.iter().map(|p| f.eval(p, symbols)).collect();
        self.conserved.push((name.to_string(), values));
    }

    /// Largest `|𝓗|` over the samples.
    pub fn max_abs_hamiltonian(&self) -> f64 {
        self.hamiltonian.iter().fold(0.0, |m, h| m.max(h.abs()))
    }

    /// Largest `|𝓗(t) − 𝓗(t_0)|`.
    pub fn hamiltonian_drift(&self) -> f64 {
        let Some(&h0) = self.hamiltonian.first() else { return 0.0 };
        self.hamiltonian.iter().fold(0.0, |m, h| m.max((h - h0).abs()))
    }

    pub fn csv_header(&self) -> Vec<String> {
        let r = self.points.first().map(|p| p.q.len()).unwrap_or(1);
        let mut cols = vec!["t".to_string()];
        if r == 1 {
            cols.push("q".into());
        } else {
            cols.extend((1..=r).map(|i| format!("q{i}")));
        }
        cols.push("u".into());
        if r == 1 {
            cols.push("p".into());
        } else {
            cols.extend((1..=r).map(|i| format!("p{i}")));
        }
        cols.push("phi".into());
        cols.push("H".into());
        cols.extend(self.conserved.iter().map(|(n, _)| n.clone()));
        cols
    }

    /// CSV with a header row; floats carry 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.csv_header().join(","))?;
        for (i, (t, p)) in self.times.iter().zip(&self.points).enumerate() {
            let mut row = vec![*t];
            row.extend(&p.q);
            row.push(p.u);
            row.extend(&p.p);
            row.push(p.phi);
            row.push(self.hamiltonian[i]);
            row.extend(self.conserved.iter().map(|(_, v)| v[i]));
            let cells: Vec<String> = row.iter().map(|x| format_float(*x)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn check_span(tspan: (f64, f64), tol: f64) -> Result<(), FlowError> {
    if !(tol > 0.0) {
        return Err(FlowError::BadParams(format!("tolerance must be positive, got {tol}")));
    }
    if !tspan.0.is_finite() || !tspan.1.is_finite() {
        return Err(FlowError::BadParams("time span must be finite".into()));
    }
    Ok(())
}

/// Integrates `(q̇, u̇, ṗ, φ̇) = (∂𝓗/∂p, ∂𝓗/∂φ, −∂𝓗/∂q, −∂𝓗/∂u)`. Steps are
/// also rejected when the local error would move `𝓗` by more than `tol`.
/// Blow-up ends the run early; the partial trajectory is returned with its reason.
pub fn integrate_canonical(
    orbit: &OrbitData,
    params: Params,
    init: &PhasePoint,
    tspan: (f64, f64),
    tol: f64,
    output: Option<Vec<f64>>,
) -> Result<Trajectory, FlowError> {
    check_span(tspan, tol)?;
    if init.q.len() != orbit.r() || init.p.len() != orbit.r() {
        return Err(FlowError::BadParams(format!("initial point must have {} coordinates per block", orbit.r())));
    }
    if !init.is_finite() {
        return Err(FlowError::BadParams("initial point is not finite".into()));
    }
    let dy = Dynamics::new(orbit, params);
    dy.hamiltonian(init)?;
    let r = orbit.r();
    let mut opts = IntegratorOptions::with_tol(tol);
    opts.output = output;
    // first-order change of 𝓗 caused by the local error, held below tol
    let monitor = |y: &[f64], e: &[f64]| match dy.hamiltonian_gradient(&PhasePoint::from_state(y)) {
        Ok(g) => {
            let grad = g.dq.iter().chain([&g.du]).chain(&g.dp).chain([&g.dphi]);
            grad.zip(e).map(|(a, b)| a * b).sum::<f64>().abs() / tol
        }
        Err(_) => f64::INFINITY,
    };
    let raw = dopri5_monitored(
        |_, y| dy.vector_field(y).ok(),
        tspan.0,
        &init.to_state(),
        tspan.1,
        &opts,
        |y| y[..=r].iter().all(|x| x.abs() <= EXP_LIMIT),
        monitor,
    );
    let points: Vec<PhasePoint> = raw.y.iter().map(|y| PhasePoint::from_state(y)).collect();
    let hamiltonian = points.iter().map(|p| dy.hamiltonian(p).unwrap_or(f64::NAN)).collect();
    Ok(Trajectory { times: raw.t, points, hamiltonian, conserved: Vec::new(), stats: raw.stats, stop: raw.stop })
}

/// Integrates `𝐪̇ = 2e^{−½𝐝·𝐪}J∇f` from `init = (q, u)` and lifts each sample
/// to phase space through `p = ∂f/∂q`, `φ = ∂f/∂u`.
pub fn integrate_first_order(
    field: &FirstOrderField,
    init: &[f64],
    tspan: (f64, f64),
    tol: f64,
    output: Option<Vec<f64>>,
) -> Result<Trajectory, FlowError> {
    check_span(tspan, tol)?;
    if init.len() != field.dim() || init.iter().any(|x| !x.is_finite()) {
        return Err(FlowError::BadParams(format!("initial point must be {} finite numbers", field.dim())));
    }
    let mut opts = IntegratorOptions::with_tol(tol);
    opts.output = output;
    let raw = dopri5(|_, y| field.eval(y), tspan.0, init, tspan.1, &opts, |y| y.iter().all(|x| x.abs() <= EXP_LIMIT));
    let dy = Dynamics::new(field.orbit(), Params::steady(field.energy()));
    let points: Vec<PhasePoint> = raw.y.iter().map(|y| field.lift(y)).collect();
    let hamiltonian = points.iter().map(|p| dy.hamiltonian(p).unwrap_or(f64::NAN)).collect();
    Ok(Trajectory { times: raw.t, points, hamiltonian, conserved: Vec::new(), stats: raw.stats, stop: raw.stop })
}
