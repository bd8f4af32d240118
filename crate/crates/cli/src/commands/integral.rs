use anyhow::{bail, Result};
use grs_core::algebra::Poly;
use grs_core::algebra::Rational;
use grs_core::dynamics::PhasePoint;
use grs_core::flows::{integrate_canonical, linspace};
use grs_core::integrals::darboux::{bryant_planar_system, j1, j2};
use grs_core::integrals::{
    darboux_verify, integral_drift, integrating_factor_check, recursion_solve, IntegralCertificate, IntegralError,
};
use grs_core::orbit::OrbitData;

use super::{curve, exponent_columns, Status};
use crate::args::{DarbouxArgs, DriftArgs, RecursionArgs, SeedArgs};
use crate::config::RunConfig;
use crate::output::{num, Table};

/// Largest deviation accepted for the integrating factor of the `n = 4` system.
const FACTOR_TOL: f64 = 1e-10;

fn solve(cfg: &RunConfig, orbit: &OrbitData, seed: &SeedArgs) -> Result<Result<IntegralCertificate, IntegralError>> {
    let s = cfg.seed(orbit, seed.seed_level.as_ref())?;
    let names = orbit.momentum_names();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    println!("seed level {}: F_c = {}, psi_c = {}", s.c, s.f_c.render(&refs), s.psi_c.render(&refs));
    Ok(recursion_solve(orbit, &s, cfg.levels(seed.levels)))
}

pub fn recursion(args: &RecursionArgs) -> Result<Status> {
    let cfg = RunConfig::load(&args.config.orbit)?;
    let orbit = cfg.orbit()?;
    let cert = match solve(&cfg, &orbit, &args.seed)? {
        Ok(c) => c,
        Err(e @ IntegralError::RecursionObstructed { .. }) => {
            println!("FAIL: {e}");
            return Ok(Status::Fail);
        }
        Err(e) => return Err(e.into()),
    };
    println!("F = {}", cert.f);
    println!("Phi = {}", cert.phi);
    println!("levels used: {}", cert.levels_used);
    if cert.trivial {
        println!("F is a multiple of H (trivial integral)");
    }
    let mut cols = exponent_columns(orbit.r());
    cols.extend(["F".to_string(), "Phi".to_string()]);
    let mut table = Table::new(cols);
    for (c, f, phi) in cert.to_rows() {
        let mut row = c;
        row.extend([f, phi]);
        table.push(row);
    }
    let ok = cert.is_valid();
    if ok {
        println!("{{F, H}} - Phi H: empty");
    } else {
        println!("FAIL: {{F, H}} - Phi H = {}", cert.residual);
    }
    if let Some(path) = cfg.out_path(&args.config.out.out) {
        table.write(&path)?;
    }
    Ok(Status::from_ok(ok))
}

pub fn drift(args: &DriftArgs) -> Result<Status> {
    let cfg = RunConfig::load(&args.config.orbit)?;
    let orbit = cfg.orbit()?;
    let c = curve(&args.curve)?;
    if c.orbit().d() != orbit.d() {
        bail!("{} lives on d = {:?}, the configured orbit has d = {:?}", c.id, c.orbit().d(), orbit.d());
    }
    let cert = match solve(&cfg, &orbit, &args.seed)? {
        Ok(cert) => cert,
        Err(e @ IntegralError::RecursionObstructed { .. }) => {
            println!("FAIL: {e}");
            return Ok(Status::Fail);
        }
        Err(e) => return Err(e.into()),
    };
    println!("F = {}", cert.f);
    let lo = if c.domain.0.is_finite() { c.domain.0 } else { 0.0 };
    let tspan = args.flow.tspan.unwrap_or((lo + 0.1, lo + 5.0));
    let grid = linspace(tspan.0, tspan.1, args.flow.points.unwrap_or(100).max(2));
    let params = c.dynamics_params();
    let (times, points): (Vec<f64>, Vec<PhasePoint>) = if args.integrate {
        let init = c.phase_point(tspan.0)?;
        let tol = args.flow.tol.unwrap_or(1e-10);
        let tr = integrate_canonical(c.orbit(), params, &init, tspan, tol, Some(grid))?;
        println!("integrated {} from t = {} to {} at tol {tol:e} ({:?})", c.id, tspan.0, tspan.1, tr.stop);
        (tr.times, tr.points)
    } else {
        println!("sampled {} on {} points in [{}, {}]", c.id, grid.len(), tspan.0, tspan.1);
        let pts = grid.iter().map(|&t| c.phase_point(t)).collect::<Result<Vec<_>, _>>()?;
        (grid, pts)
    };
    let d = integral_drift(&orbit, &params, &cert.f, &points)?;
    let symbols = [params.e.max(0.0).sqrt()];
    let mut table = Table::new(["t", "F", "drift"]);
    let f0 = points.first().map(|p| cert.f.eval(p, &symbols)).unwrap_or(0.0);
    for (t, p) in times.iter().zip(&points) {
        let v = cert.f.eval(p, &symbols);
        table.push(vec![num(*t), num(v), num((v - f0).abs())]);
    }
    let ok = d < args.threshold;
    println!("F(start) = {f0:.12}");
    println!("drift {d:.3e} {} {:e}", if ok { "<" } else { ">=" }, args.threshold);
    if let Some(path) = cfg.out_path(&args.config.out.out) {
        table.write(&path)?;
    }
    Ok(Status::from_ok(ok))
}

/// `2*x` as `2x`.
fn compact(p: &Poly<Rational>) -> String {
    p.render(&["x", "y"]).replace('*', "")
}

pub fn darboux(args: &DarbouxArgs) -> Result<Status> {
    let n = args.n;
    let (p, q) = bryant_planar_system(n);
    println!("n = {n}: x' = {}, y' = {}", compact(&p), compact(&q));
    let mut table = Table::new(["quantity", "value"]);
    let mut ok = true;
    let a = j1(n);
    match darboux_verify(&p, &q, &a) {
        Some(g) => {
            println!("J1 = {}: X(J1) = g J1 with g = {}", compact(&a), compact(&g));
            table.push(vec!["J1".into(), compact(&a)]);
            table.push(vec!["J1 cofactor".into(), compact(&g)]);
        }
        None => {
            println!("FAIL: J1 = {} is not a Darboux polynomial", compact(&a));
            ok = false;
        }
    }
    let b = j2();
    match darboux_verify(&p, &q, &b) {
        Some(g) => {
            println!("J2 = {}: X(J2) = g J2 with g = {}", compact(&b), compact(&g));
            table.push(vec!["J2".into(), compact(&b)]);
            table.push(vec!["J2 cofactor".into(), compact(&g)]);
        }
        None if n == 4 => {
            println!("FAIL: J2 = {} is not a Darboux polynomial", compact(&b));
            ok = false;
        }
        None => println!("J2 = {} is not a Darboux polynomial for n = {n}", compact(&b)),
    }
    if n == 4 {
        let rep = integrating_factor_check(args.grid, 0.1, 2.0, 1e-5);
        println!(
            "integrating factor sqrt(J1)/J2 on {} points of [0.1, 2]^2: max |X(R) + div(X) R| = {:.3e}, finite-difference divergence {:.3e}",
            rep.points, rep.max_deviation, rep.max_fd_divergence
        );
        table.push(vec!["integrating factor points".into(), rep.points.to_string()]);
        table.push(vec!["integrating factor max deviation".into(), num(rep.max_deviation)]);
        table.push(vec!["integrating factor max fd divergence".into(), num(rep.max_fd_divergence)]);
        if !(rep.max_deviation < FACTOR_TOL) {
            println!("FAIL: deviation {:.3e} >= {FACTOR_TOL:e}", rep.max_deviation);
            ok = false;
        }
    }
    if let Some(path) = &args.out.out {
        table.write(path)?;
    }
    Ok(Status::from_ok(ok))
}
