use anyhow::{anyhow, bail, Result};
use grs_core::flows::{
    default_grid, linspace, residual_scan, smoothness_check, CatalogId, Limit, SolutionCurve, Verdict, LIMIT_STEPS,
};

use super::{curve, indexed, Status};
use crate::args::{CatalogCheckArgs, CatalogEvalArgs, OutArgs, SmoothnessArgs, VerdictArg};
use crate::output::{num, Table};

pub fn list(args: &OutArgs) -> Result<Status> {
    let mut table = Table::new(["id", "orbit", "energy", "collapsing", "description"]);
    for id in CatalogId::ALL {
        let orbit = id.orbit();
        let energy = if id.zero_energy() { "E = 0" } else { "E > 0" };
        let collapsing = id.collapsing_index().map(|k| (k + 1).to_string()).unwrap_or_else(|| "-".into());
        println!("{:<24} {:<10} {energy:<6} {collapsing:<2} {}", id.name(), orbit.name(), id.description());
        table.push(vec![id.name().into(), orbit.name().into(), energy.into(), collapsing, id.description().into()]);
    }
    if let Some(path) = &args.out {
        table.write(path)?;
    }
    Ok(Status::Pass)
}

fn grid(c: &SolutionCurve, tspan: Option<(f64, f64)>, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        bail!("--points must be positive");
    }
    Ok(match tspan {
        Some((a, b)) => linspace(a, b, points),
        None => default_grid(c, points),
    })
}

fn describe(c: &SolutionCurve) {
    let p = &c.params;
    let a = if c.orbit().n() == 1 { format!(", a = {}", c.a()) } else { String::new() };
    // `+ 0.0` turns a negative zero into a positive one
    println!("{}: E = {}, t0 = {}, t1 = {}{a}", c.id, p.e, c.t0() + 0.0, p.t1);
    println!("domain ({}, {})", c.domain.0 + 0.0, c.domain.1);
}

pub fn eval(args: &CatalogEvalArgs) -> Result<Status> {
    let c = curve(&args.curve)?;
    describe(&c);
    let r = c.orbit().r();
    let mut cols = vec!["t".to_string()];
    cols.extend(indexed("h", r));
    cols.extend(indexed("q", r));
    cols.push("u".into());
    cols.extend(indexed("qdot", r));
    cols.push("udot".into());
    println!("{}", cols.join(" "));
    let mut table = Table::new(cols);
    for t in grid(&c, args.tspan, args.points)? {
        let s = c.sample(t)?;
        let h = c.h(t)?;
        let mut row = vec![t];
        row.extend(h.iter().map(|j| j.v));
        row.extend(&s.q);
        row.push(s.u);
        row.extend(&s.qdot);
        row.push(s.udot);
        println!("{}", row.iter().map(|x| format!("{x:.10e}")).collect::<Vec<_>>().join(" "));
        table.push(row.into_iter().map(num).collect());
    }
    if let Some(path) = &args.out.out {
        table.write(path)?;
    }
    Ok(Status::Pass)
}

pub fn check(args: &CatalogCheckArgs) -> Result<Status> {
    let c = curve(&args.curve)?;
    describe(&c);
    let ts = grid(&c, args.tspan, args.points)?;
    let params = c.dynamics_params();
    let rep = residual_scan(&c, c.orbit(), params, &ts)?;
    println!("{} points in [{}, {}]", rep.points, ts[0], ts[ts.len() - 1]);
    println!("  res3 (second-order equations) {:.3e}", rep.res3);
    println!("  res4 (u equation)             {:.3e}", rep.res4);
    println!("  res7 (first-order constraint) {:.3e}", rep.res7);
    println!("  res8 (conservation law)       {:.3e}", rep.res8);
    println!("  |H|                           {:.3e}", rep.hamiltonian);
    println!("  scalar curvature gap          {:.3e}", rep.curvature_gap);
    if let Some(g) = rep.rbar_gap {
        println!("  explicit scalar curvature gap {g:.3e}");
    }
    if let Some(g) = rep.mean_curvature_gap {
        println!("  tr L - 2/t                    {g:.3e}");
    }
    let max = rep.max();
    let ok = max < args.threshold;
    println!("max residual {max:.3e} {} {:e}", if ok { "<" } else { ">=" }, args.threshold);
    if let Some(path) = &args.out.out {
        let mut table =
            Table::new(["t", "res3", "res4", "res7", "res8", "H", "curvature_gap", "rbar_gap", "mean_curvature_gap"]);
        for &t in &ts {
            let p = residual_scan(&c, c.orbit(), params, &[t])?;
            let opt = |x: Option<f64>| x.map(num).unwrap_or_default();
            table.push(vec![
                num(t),
                num(p.res3),
                num(p.res4),
                num(p.res7),
                num(p.res8),
                num(p.hamiltonian),
                num(p.curvature_gap),
                opt(p.rbar_gap),
                opt(p.mean_curvature_gap),
            ]);
        }
        table.write(path)?;
    }
    Ok(Status::from_ok(ok))
}

/// Value of a named quantity at `t`, matching the names in the report.
fn quantity(c: &SolutionCurve, name: &str, t: f64) -> Result<f64> {
    if name == "u'(0)" {
        return Ok(c.u(t)?.d1);
    }
    let rest = name.strip_prefix('h').ok_or_else(|| anyhow!("unknown quantity {name}"))?;
    let (index, derivative) = match rest.strip_suffix("'(0)") {
        Some(i) => (i, true),
        None => (rest.strip_suffix("(0)").ok_or_else(|| anyhow!("unknown quantity {name}"))?, false),
    };
    let k: usize = index.parse()?;
    let h = c.h(t)?;
    let j = h.get(k - 1).ok_or_else(|| anyhow!("unknown quantity {name}"))?;
    Ok(if derivative { j.d1 } else { j.v })
}

pub fn smoothness(args: &SmoothnessArgs) -> Result<Status> {
    let c = curve(&args.curve)?;
    describe(&c);
    let r = c.orbit().r();
    let collapsing = match args.collapsing {
        Some(0) => bail!("--collapsing is 1-based"),
        Some(k) if k > r => bail!("--collapsing {k} exceeds the {r} factors of {}", c.id),
        Some(k) => k - 1,
        None => {
            c.id.collapsing_index().ok_or_else(|| anyhow!("{} has no collapsing factor; pass --collapsing", c.id))?
        }
    };
    let rep = smoothness_check(&c, collapsing)?;
    println!("limits at t -> {}+ (factor {} collapsing):", rep.at + 0.0, collapsing + 1);
    let mut cols = vec!["quantity".to_string()];
    cols.extend(LIMIT_STEPS.iter().map(|s| format!("at+{s}")));
    cols.extend(["kind", "limit", "order_or_exponent", "expected", "ok"].map(String::from));
    let mut table = Table::new(cols);
    for ch in &rep.checks {
        let expected = ch.expected.map(|e| format!("{e}")).unwrap_or_else(|| "> 0".into());
        let status = if ch.ok { "ok" } else { "fails" };
        let (kind, limit, order) = match ch.limit {
            Limit::Finite { value, order } => {
                let value = value + 0.0;
                println!("  {:<7} -> {value:.8} (expected {expected}, leading order {order}) {status}", ch.quantity);
                ("finite", num(value), num(order))
            }
            Limit::Blowup { exponent, sign } => {
                let s = if sign < 0.0 { "-" } else { "+" };
                println!("  {:<7} -> {s}infinity like t^{exponent:.4} (expected {expected}) {status}", ch.quantity);
                ("blowup", if sign < 0.0 { "-inf".into() } else { "inf".into() }, num(exponent))
            }
        };
        let mut row = vec![ch.quantity.clone()];
        for dt in LIMIT_STEPS {
            row.push(num(quantity(&c, &ch.quantity, rep.at + dt)?));
        }
        row.extend([
            kind.to_string(),
            limit,
            order,
            ch.expected.map(num).unwrap_or_else(|| "positive".into()),
            ch.ok.to_string(),
        ]);
        table.push(row);
    }
    let verdict = match rep.verdict {
        Verdict::Smooth => VerdictArg::Smooth,
        Verdict::Conical => VerdictArg::Conical,
        Verdict::Blowup => VerdictArg::Blowup,
        Verdict::Singular => VerdictArg::Singular,
    };
    println!("verdict: {verdict:?}");
    let ok = args.expect.is_none_or(|e| e == verdict);
    if !ok {
        println!("FAIL: expected {:?}", args.expect.expect("checked above"));
    }
    if let Some(path) = &args.out.out {
        table.write(path)?;
    }
    Ok(Status::from_ok(ok))
}
