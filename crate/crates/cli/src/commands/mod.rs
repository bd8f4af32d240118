mod catalog;
mod flow;
mod integral;
mod orbit;
mod superpotential;

use anyhow::{bail, Result};
use grs_core::algebra::{fmt_rational, to_f64};
use grs_core::flows::{closed_form, CurveParams, SolutionCurve};
use grs_core::orbit::ExtVector;

use crate::args::{
    CanonicalCmd, CatalogCmd, Command, CurveArgs, IntegralCmd, OrbitCmd, SubsystemCmd, SuperpotentialCmd,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_ok(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

pub fn run(command: Command) -> Result<Status> {
    match command {
        Command::Orbit(OrbitCmd::Validate(a)) => orbit::validate(&a),
        Command::Superpotential(SuperpotentialCmd::Search(a)) => superpotential::search(&a),
        Command::Superpotential(SuperpotentialCmd::Verify(a)) => superpotential::verify(&a),
        Command::Subsystem(SubsystemCmd::Integrate(a)) => flow::subsystem(&a),
        Command::Canonical(CanonicalCmd::Integrate(a)) => flow::canonical(&a),
        Command::Integral(IntegralCmd::Recursion(a)) => integral::recursion(&a),
        Command::Integral(IntegralCmd::Drift(a)) => integral::drift(&a),
        Command::Darboux(a) => integral::darboux(&a),
        Command::Catalog(CatalogCmd::List(a)) => catalog::list(&a),
        Command::Catalog(CatalogCmd::Eval(a)) => catalog::eval(&a),
        Command::Catalog(CatalogCmd::Check(a)) => catalog::check(&a),
        Command::Smoothness(a) => catalog::smoothness(&a),
    }
}

pub fn curve(args: &CurveArgs) -> Result<SolutionCurve> {
    let e = to_f64(&args.e);
    let params = CurveParams { e, t0: args.t0, t1: args.t1, a: args.a, u_at_ref: 0.0 };
    Ok(closed_form(args.id, params)?)
}

/// Column names `{prefix}1 … {prefix}r` (`{prefix}` alone when `r = 1`).
pub fn indexed(prefix: &str, r: usize) -> Vec<String> {
    if r == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=r).map(|i| format!("{prefix}{i}")).collect()
    }
}

/// Exponent columns `c_q…, c_u`.
pub fn exponent_columns(r: usize) -> Vec<String> {
    let mut cols: Vec<String> = indexed("c_q", r);
    cols.push("c_u".into());
    cols
}

pub fn exponent_cells(c: &ExtVector) -> Vec<String> {
    c.0.iter().map(fmt_rational).collect()
}

pub fn require_len(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        bail!("{what} must have {expected} entries, got {got}");
    }
    Ok(())
}
