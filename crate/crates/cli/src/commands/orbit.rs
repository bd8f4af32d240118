use anyhow::Result;
use grs_core::algebra::{fmt_rational, int};

use super::{indexed, Status};
use crate::args::ConfigArgs;
use crate::config::RunConfig;
use crate::output::Table;

/// The form must be Lorentzian with `J(𝐝, 𝐝) = 1`.
pub fn validate(args: &ConfigArgs) -> Result<Status> {
    let cfg = RunConfig::load(&args.orbit)?;
    let orbit = cfg.orbit()?;
    let form = orbit.lorentz();
    let r = orbit.r();
    let name = if orbit.name().is_empty() { "(unnamed)" } else { orbit.name() };
    println!("orbit {name}: n = {}, r = {r}, d = {:?}", orbit.n(), orbit.d());
    for (w, a) in orbit.extended_weights() {
        let a = a.map(|a| fmt_rational(&a)).unwrap_or_else(|| "E".into());
        let j = form.quadratic(&orbit.d_ext().add(&w))?;
        println!("  weight {w}, A = {a}, J(d + w, d + w) = {}", fmt_rational(&j));
    }
    let mut cols = indexed("p", r);
    cols.push("phi".into());
    println!("J on ({}):", cols.join(", "));
    let mut table = Table::new(std::iter::once("row".to_string()).chain(cols.iter().cloned()));
    for (i, name) in cols.iter().enumerate() {
        let row: Vec<String> = (0..=r).map(|j| fmt_rational(&form.entry(i, j))).collect();
        println!("  [ {} ]", row.iter().map(|x| format!("{x:>6}")).collect::<Vec<_>>().join(" "));
        table.push(std::iter::once(name.clone()).chain(row).collect());
    }
    let (pos, neg, zero) = form.signature();
    println!("signature: {pos} positive, {neg} negative, {zero} zero");
    let jd = form.quadratic(&orbit.d_ext())?;
    println!("J(d, d) = {}", fmt_rational(&jd));
    let lorentzian = (pos, neg, zero) == (1, r, 0);
    let ok = lorentzian && jd == int(1);
    if !lorentzian {
        println!("FAIL: expected signature (1, {r}, 0)");
    } else if !ok {
        println!("FAIL: J(d, d) must equal 1");
    } else {
        println!("orbit valid");
    }
    if let Some(path) = cfg.out_path(&args.out.out) {
        table.write(&path)?;
    }
    Ok(Status::from_ok(ok))
}
