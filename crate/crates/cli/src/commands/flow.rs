use anyhow::{anyhow, bail, Result};
use grs_core::dynamics::{Params, PhasePoint};
use grs_core::flows::{
    closed_form, integrate_canonical, integrate_first_order, linspace, CatalogId, CurveParams, SolutionCurve,
    StopReason, Trajectory,
};
use grs_core::integrals::recursion_solve;
use grs_core::orbit::OrbitData;
use grs_core::superpotential::first_order_subsystem;

use super::{require_len, Status};
use crate::args::{CanonicalArgs, FlowArgs, SubsystemArgs};
use crate::config::{FlowSpec, RunConfig};
use crate::output::write_trajectory;

const DEFAULT_TOL: f64 = 1e-10;

struct Run {
    tspan: (f64, f64),
    tol: f64,
    output: Option<Vec<f64>>,
}

fn run_options(flags: &FlowArgs, spec: &FlowSpec, default_span: Option<(f64, f64)>) -> Result<Run> {
    let tspan = flags
        .tspan
        .or(spec.tspan.map(|[a, b]| (a, b)))
        .or(default_span)
        .ok_or_else(|| anyhow!("no time span: pass --tspan A:B or set flow.tspan"))?;
    let tol = flags.tol.or(spec.tol).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) {
        bail!("flow.tol must be positive");
    }
    let output = match flags.points.or(spec.points) {
        Some(n) if n < 2 => bail!("--points must be at least 2"),
        Some(n) => Some(linspace(tspan.0, tspan.1, n)),
        None => None,
    };
    Ok(Run { tspan, tol, output })
}

fn catalog_start(id: CatalogId, e: f64, t: f64) -> Result<SolutionCurve> {
    let params = if id.zero_energy() { CurveParams::with_energy(0.0) } else { CurveParams::with_energy(e) };
    let curve = closed_form(id, params)?;
    if !curve.contains(t) {
        bail!("--tspan must start inside the domain ({}, {}) of {id}", curve.domain.0, curve.domain.1);
    }
    Ok(curve)
}

fn same_orbit(a: &OrbitData, b: &OrbitData) -> Result<()> {
    if a.d() != b.d() || a.weights() != b.weights() {
        bail!("the configured orbit differs from the orbit of the chosen curve");
    }
    Ok(())
}

/// Largest `|q − q_closed|, |u − u_closed|` over the samples.
fn closed_form_gap(tr: &Trajectory, curve: &SolutionCurve) -> Result<f64> {
    let mut gap: f64 = 0.0;
    for (t, p) in tr.times.iter().zip(&tr.points) {
        let s = curve.sample(*t)?;
        gap = p.q.iter().zip(&s.q).map(|(x, y)| (x - y).abs()).fold(gap.max((p.u - s.u).abs()), f64::max);
    }
    Ok(gap)
}

fn summarize(tr: &Trajectory) {
    let st = &tr.stats;
    println!("steps: {} accepted, {} rejected, {} evaluations", st.accepted, st.rejected, st.evaluations);
    println!("stop: {:?}", tr.stop);
    if let Some((t, p)) = tr.last() {
        println!("final t = {t:.12}: q = {:?}, u = {:.12}, p = {:?}, phi = {:.12}", p.q, p.u, p.p, p.phi);
    }
    println!("max |H| = {:.3e}", tr.max_abs_hamiltonian());
}

pub fn subsystem(args: &SubsystemArgs) -> Result<Status> {
    let cfg = RunConfig::load(&args.config.orbit)?;
    let orbit = cfg.orbit()?;
    let params = cfg.params(orbit.n(), &args.params)?;
    if params.epsilon != 0.0 {
        bail!("the first-order subsystem needs epsilon = 0");
    }
    let spec = cfg.superpotential()?;
    let f = spec.terms(&orbit)?;
    let field = first_order_subsystem(&orbit, &f, params.e, &spec.free)?;
    let flow = cfg.flow();
    let curve = match args.id {
        Some(id) => {
            let start = args.flow.tspan.or(flow.tspan.map(|[a, b]| (a, b))).map(|s| s.0).unwrap_or(1.0);
            let c = catalog_start(id, params.e, start)?;
            same_orbit(&orbit, c.orbit())?;
            Some(c)
        }
        None => None,
    };
    let default_span = curve.as_ref().map(|_| (1.0, 6.0));
    let run = run_options(&args.flow, &flow, default_span)?;
    let init = match &curve {
        Some(c) => {
            let s = c.sample(run.tspan.0)?;
            s.q.iter().copied().chain([s.u]).collect()
        }
        None => flow.init.clone().ok_or_else(|| anyhow!("no initial point: set flow.init = [q..., u] or pass --id"))?,
    };
    require_len("flow.init", init.len(), orbit.r() + 1)?;
    println!("f = {f}");
    println!("E = {}, tspan = {:?}, tol = {:e}", params.e, run.tspan, run.tol);
    let tr = integrate_first_order(&field, &init, run.tspan, run.tol, run.output)?;
    summarize(&tr);
    if let Some(c) = &curve {
        println!("max gap to {} = {:.3e}", c.id, closed_form_gap(&tr, c)?);
    }
    if let Some(path) = cfg.out_path(&args.config.out.out) {
        write_trajectory(&tr, &path)?;
    }
    if tr.stop != StopReason::Completed {
        println!("FAIL: integration stopped early ({:?})", tr.stop);
    }
    Ok(Status::from_ok(tr.stop == StopReason::Completed))
}

pub fn canonical(args: &CanonicalArgs) -> Result<Status> {
    let cfg = match &args.orbit {
        Some(path) => RunConfig::load(path)?,
        None if args.id.is_some() => RunConfig::default(),
        None => bail!("pass --orbit PATH or --id NAME"),
    };
    let flow = cfg.flow();
    let (orbit, params, curve): (OrbitData, Params, Option<SolutionCurve>) = match args.id {
        Some(id) => {
            let e = match &args.params.e {
                Some(q) => grs_core::algebra::to_f64(q),
                None if cfg.orbit.is_some() => cfg.params(id.orbit().n(), &args.params)?.e,
                None => 1.0,
            };
            if args.params.epsilon.as_ref().is_some_and(|x| *x != grs_core::algebra::int(0)) {
                bail!("closed-form curves are steady; --epsilon must be 0 with --id");
            }
            let start = args.flow.tspan.or(flow.tspan.map(|[a, b]| (a, b))).map(|s| s.0).unwrap_or(1.0);
            let c = catalog_start(id, e, start)?;
            if cfg.orbit.is_some() {
                same_orbit(&cfg.orbit()?, c.orbit())?;
            }
            (c.orbit().clone(), c.dynamics_params(), Some(c))
        }
        None => {
            let orbit = cfg.orbit()?;
            let params = cfg.params(orbit.n(), &args.params)?;
            (orbit, params, None)
        }
    };
    let default_span = curve.as_ref().map(|_| (1.0, 6.0));
    let run = run_options(&args.flow, &flow, default_span)?;
    let init = match &curve {
        Some(c) => c.phase_point(run.tspan.0)?,
        None => {
            let v = flow.init.clone().ok_or_else(|| anyhow!("no initial point: set flow.init or pass --id"))?;
            require_len("flow.init", v.len(), 2 * orbit.r() + 2)?;
            PhasePoint::from_state(&v)
        }
    };
    println!(
        "orbit {}: tau = {}, epsilon = {}, E = {}, C = {}",
        orbit.name(),
        params.tau,
        params.epsilon,
        params.e,
        params.c
    );
    println!("tspan = {:?}, tol = {:e}", run.tspan, run.tol);
    let mut tr = integrate_canonical(&orbit, params, &init, run.tspan, run.tol, run.output)?;
    if cfg.integral.is_some() {
        if params.tau != 1.0 || params.epsilon != 0.0 {
            bail!("[integral] is only tracked for steady parameters (tau = 1, epsilon = 0)");
        }
        let seed = cfg.seed(&orbit, None)?;
        let cert = recursion_solve(&orbit, &seed, cfg.levels(None))?;
        tr.register("F", &cert.f, &[params.e.max(0.0).sqrt()]);
        let values = &tr.conserved[0].1;
        let drift = values.iter().map(|v| (v - values[0]).abs()).fold(0.0, f64::max);
        println!("F = {}", cert.f);
        println!("F drift = {drift:.3e}");
    }
    summarize(&tr);
    println!("H drift = {:.3e}", tr.hamiltonian_drift());
    if let Some(c) = &curve {
        println!("max gap to {} = {:.3e}", c.id, closed_form_gap(&tr, c)?);
    }
    if let Some(path) = cfg.out_path(&args.out.out) {
        write_trajectory(&tr, &path)?;
    }
    let hmax = tr.max_abs_hamiltonian();
    let mut ok = true;
    if tr.stop != StopReason::Completed {
        println!("FAIL: integration stopped early ({:?})", tr.stop);
        ok = false;
    }
    if !(hmax < args.constraint_tol) {
        println!("FAIL: max |H| = {hmax:.3e} >= {:e}", args.constraint_tol);
        ok = false;
    }
    Ok(Status::from_ok(ok))
}
