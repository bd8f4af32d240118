use anyhow::{bail, Result};
use grs_core::algebra::fmt_rational;
use grs_core::orbit::{ExtVector, OrbitData};
use grs_core::superpotential::{
    candidate_set, lemma52_warnings, solve_superpotential_with, superpotential_residual_with, CertificateKind, Energy,
    SolveOptions,
};

use super::{exponent_cells, exponent_columns, Status};
use crate::args::{EnergyArg, SearchArgs, VerifyArgs};
use crate::config::{RunConfig, SuperpotentialSpec};
use crate::output::Table;

fn energy(flag: Option<EnergyArg>, spec: Option<&SuperpotentialSpec>) -> Result<Energy> {
    if let Some(e) = flag {
        return Ok(match e {
            EnergyArg::Formal => Energy::Formal,
            EnergyArg::Zero => Energy::Zero,
        });
    }
    match spec.and_then(|s| s.energy.as_deref()) {
        None | Some("formal") => Ok(Energy::Formal),
        Some("zero") => Ok(Energy::Zero),
        Some(other) => bail!("superpotential.energy must be \"formal\" or \"zero\", got {other:?}"),
    }
}

fn energy_label(e: Energy) -> &'static str {
    match e {
        Energy::Formal => "E = s^2",
        Energy::Zero => "E = 0",
    }
}

fn candidates(orbit: &OrbitData, spec: Option<&SuperpotentialSpec>) -> Result<Vec<ExtVector>> {
    let Some(spec) = spec else {
        return Ok(candidate_set(orbit, &[]).into_iter().map(|c| c.c).collect());
    };
    if let Some(list) = &spec.candidates {
        return SuperpotentialSpec::vectors(list, "candidates", orbit);
    }
    let augment = SuperpotentialSpec::vectors(&spec.augment, "augment", orbit)?;
    Ok(candidate_set(orbit, &augment).into_iter().map(|c| c.c).collect())
}

pub fn search(args: &SearchArgs) -> Result<Status> {
    let cfg = RunConfig::load(&args.config.orbit)?;
    let orbit = cfg.orbit()?;
    let spec = cfg.superpotential.as_ref();
    let energy = energy(args.energy, spec)?;
    let cands = candidates(&orbit, spec)?;
    let form = orbit.lorentz();
    println!("{} candidates, {}", cands.len(), energy_label(energy));
    for c in &cands {
        let j = form.quadratic(c)?;
        println!(
            "  {c}  J(c, c) = {}{}",
            fmt_rational(&j),
            if j == grs_core::algebra::int(0) { " (null)" } else { "" }
        );
    }
    let mut opts = SolveOptions { energy, ..Default::default() };
    if let Some(max) = spec.and_then(|s| s.max_candidates) {
        opts.max_candidates = max;
    }
    let certs = solve_superpotential_with(&orbit, &cands, &opts)?;
    let mut cols = vec!["certificate".to_string(), "kind".to_string()];
    cols.extend(exponent_columns(orbit.r()));
    cols.push("coefficient".into());
    let mut table = Table::new(cols);
    for (i, cert) in certs.iter().enumerate() {
        let kind = format!("{:?}", cert.kind);
        println!("certificate {}: {kind}", i + 1);
        if let Some(f) = &cert.solution {
            println!("  f = {f}");
            for (c, coeff) in f.to_rows() {
                let mut row = vec![(i + 1).to_string(), kind.clone()];
                row.extend(c);
                row.push(coeff);
                table.push(row);
            }
        }
        if let Some(w) = &cert.witness {
            println!("  hull vertices (none null):");
            for (v, j) in &w.vertices {
                println!("    {v}  J = {}", fmt_rational(j));
            }
            for e in &w.edges {
                let nearest = e.nearest.as_ref().map(|n| n.to_string()).unwrap_or_else(|| "none".into());
                println!(
                    "  edge {} -> {}: J(c0, c0) = {}, J(c0, c1) = {}, nearest candidate {nearest}",
                    e.c0,
                    e.c1,
                    fmt_rational(&e.j_c0_c0),
                    fmt_rational(&e.j_c0_c1)
                );
            }
            println!("  admissible supports: {}", w.admissible_supports);
        }
        if let Some(o) = &cert.obstruction {
            println!("  obstruction at {}: {}", o.b, o.detail);
        }
        for w in &cert.warnings {
            println!("  warning: {w}");
        }
        if cert.kind != CertificateKind::Solution {
            let mut row = vec![(i + 1).to_string(), kind.clone()];
            row.extend(std::iter::repeat_n(String::new(), orbit.r() + 2));
            table.push(row);
        }
    }
    if let Some(path) = cfg.out_path(&args.config.out.out) {
        table.write(&path)?;
    }
    Ok(Status::Pass)
}

pub fn verify(args: &VerifyArgs) -> Result<Status> {
    let cfg = RunConfig::load(&args.config.orbit)?;
    let orbit = cfg.orbit()?;
    let spec = cfg.superpotential()?;
    let energy = energy(args.energy, Some(spec))?;
    let f = spec.terms(&orbit)?;
    println!("f = {f}");
    println!("{}", energy_label(energy));
    let res = superpotential_residual_with(&orbit, &f, &energy.value());
    let mut cols = exponent_columns(orbit.r());
    cols.push("residual".into());
    let mut table = Table::new(cols);
    for (c, m) in res.terms() {
        let mut row = exponent_cells(c);
        row.push(m.to_string());
        table.push(row);
    }
    let ok = res.is_empty();
    if ok {
        println!("residual: empty");
        for w in lemma52_warnings(&orbit, &f) {
            println!("warning: {w}");
        }
    } else {
        let (b, m) = res.terms().next().expect("nonempty residual");
        println!("residual: {} nonzero terms; first at exponent {b}: {m}", res.len());
    }
    if let Some(path) = cfg.out_path(&args.config.out.out) {
        table.write(&path)?;
    }
    Ok(Status::from_ok(ok))
}
