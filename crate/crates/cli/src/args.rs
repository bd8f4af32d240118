//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grs_core::algebra::parse_rational;
use grs_core::algebra::Rational;
use grs_core::flows::CatalogId;
use grs_core::orbit::ExtVector;

#[derive(Debug, Parser)]
#[command(
    name = "grs",
    version,
    about = "Cohomogeneity-one gradient Ricci solitons: exact searches and numerical flows"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orbit data checks.
    #[command(subcommand)]
    Orbit(OrbitCmd),
    /// Exact superpotential search and verification.
    #[command(subcommand)]
    Superpotential(SuperpotentialCmd),
    /// First-order flow induced by a superpotential.
    #[command(subcommand)]
    Subsystem(SubsystemCmd),
    /// Hamiltonian flow under the zero-energy constraint.
    #[command(subcommand)]
    Canonical(CanonicalCmd),
    /// Generalized first integrals.
    #[command(subcommand)]
    Integral(IntegralCmd),
    /// Darboux polynomials of the planar Bryant system.
    Darboux(DarbouxArgs),
    /// Closed-form solutions.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Regularity at the singular orbit of a closed-form solution.
    Smoothness(SmoothnessArgs),
}

#[derive(Debug, Subcommand)]
pub enum OrbitCmd {
    /// Prints the form J, its signature and the value J(d, d).
    Validate(ConfigArgs),
}

#[derive(Debug, Subcommand)]
pub enum SuperpotentialCmd {
    /// Solves for superpotentials supported on the configured candidates.
    Search(SearchArgs),
    /// Checks the configured terms exactly.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum SubsystemCmd {
    Integrate(SubsystemArgs),
}

#[derive(Debug, Subcommand)]
pub enum CanonicalCmd {
    Integrate(CanonicalArgs),
}

#[derive(Debug, Subcommand)]
pub enum IntegralCmd {
    /// Runs the level recursion from a seed level.
    Recursion(RecursionArgs),
    /// Largest change of the integral along a solution.
    Drift(DriftArgs),
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    List(OutArgs),
    /// Samples a closed form on a grid.
    Eval(CatalogEvalArgs),
    /// Residuals of the soliton equations along a closed form.
    Check(CatalogCheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnergyArg {
    /// `E = s²` symbolically.
    Formal,
    /// `E = 0`.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerdictArg {
    Smooth,
    Conical,
    Blowup,
    Singular,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Also write the numeric output as CSV.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// TOML run configuration with an [orbit] table.
    #[arg(long, value_name = "PATH")]
    pub orbit: PathBuf,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Energy; overrides the configuration.
    #[arg(long = "E", value_name = "RAT", value_parser = rational, allow_hyphen_values = true)]
    pub e: Option<Rational>,
    #[arg(long, value_name = "RAT", value_parser = rational, allow_hyphen_values = true)]
    pub epsilon: Option<Rational>,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long, value_name = "FLOAT", value_parser = positive)]
    pub tol: Option<f64>,
    #[arg(long, value_name = "A:B", value_parser = span, allow_hyphen_values = true)]
    pub tspan: Option<(f64, f64)>,
    /// Report the solution at this many evenly spaced times instead of every step.
    #[arg(long, value_name = "INT")]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_name = "NAME", value_parser = catalog_id)]
    pub id: CatalogId,
    #[arg(long = "E", value_name = "RAT", value_parser = rational, allow_hyphen_values = true, default_value = "1")]
    pub e: Rational,
    #[arg(long, value_name = "FLOAT", allow_hyphen_values = true, default_value_t = 0.0)]
    pub t0: f64,
    #[arg(long, value_name = "FLOAT", allow_hyphen_values = true, default_value_t = 0.0)]
    pub t1: f64,
    /// Family parameter of the circle solutions.
    #[arg(long, value_name = "FLOAT", allow_hyphen_values = true)]
    pub a: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum)]
    pub energy: Option<EnergyArg>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum)]
    pub energy: Option<EnergyArg>,
}

#[derive(Debug, Args)]
pub struct SubsystemArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub flow: FlowArgs,
    /// Start on this closed form at the beginning of the time span.
    #[arg(long, value_name = "NAME", value_parser = catalog_id)]
    pub id: Option<CatalogId>,
}

#[derive(Debug, Args)]
pub struct CanonicalArgs {
    /// Run configuration; optional when starting from a closed form.
    #[arg(long, value_name = "PATH")]
    pub orbit: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub flow: FlowArgs,
    /// Start on this closed form at the beginning of the time span.
    #[arg(long, value_name = "NAME", value_parser = catalog_id)]
    pub id: Option<CatalogId>,
    /// Failure threshold for max |H| along the run.
    #[arg(long, value_name = "FLOAT", value_parser = positive, default_value_t = 1e-8)]
    pub constraint_tol: f64,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Seed exponent, comma separated, e.g. -3,1.
    #[arg(long, value_name = "VEC", value_parser = ext_vector, allow_hyphen_values = true)]
    pub seed_level: Option<ExtVector>,
    #[arg(long, value_name = "INT")]
    pub levels: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RecursionArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
}

#[derive(Debug, Args)]
pub struct DriftArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub seed: SeedArgs,
    #[command(flatten)]
    pub curve: CurveArgs,
    #[command(flatten)]
    pub flow: FlowArgs,
    /// Integrate the canonical flow from the closed form instead of sampling it.
    #[arg(long)]
    pub integrate: bool,
    #[arg(long, value_name = "FLOAT", value_parser = positive, default_value_t = 1e-7)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct DarbouxArgs {
    /// Dimension parameter of the planar system.
    #[arg(long, value_name = "INT", value_parser = clap::value_parser!(u32).range(1..))]
    pub n: u32,
    /// Side of the square grid for the integrating-factor check.
    #[arg(long, value_name = "INT", default_value_t = 20)]
    pub grid: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CatalogEvalArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, value_name = "A:B", value_parser = span, allow_hyphen_values = true)]
    pub tspan: Option<(f64, f64)>,
    #[arg(long, value_name = "INT", default_value_t = 11)]
    pub points: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct CatalogCheckArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, value_name = "A:B", value_parser = span, allow_hyphen_values = true)]
    pub tspan: Option<(f64, f64)>,
    #[arg(long, value_name = "INT", default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_name = "FLOAT", value_parser = positive, default_value_t = 1e-8)]
    pub threshold: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
pub struct SmoothnessArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Factor that collapses (1-based); defaults to the family's own.
    #[arg(long, value_name = "INT", value_parser = clap::value_parser!(usize))]
    pub collapsing: Option<usize>,
    /// Exit with status 1 unless this verdict is reached.
    #[arg(long, value_enum)]
    pub expect: Option<VerdictArg>,
    #[command(flatten)]
    pub out: OutArgs,
}

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).ok_or_else(|| format!("`{text}` is not a rational number like 3/2"))
}

fn positive(text: &str) -> Result<f64, String> {
    match text.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{text}` is not a positive number")),
    }
}

fn span(text: &str) -> Result<(f64, f64), String> {
    let bad = || format!("`{text}` is not a span A:B");
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !a.is_finite() || !b.is_finite() || a == b {
        return Err(bad());
    }
    Ok((a, b))
}

fn ext_vector(text: &str) -> Result<ExtVector, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    ExtVector::parse(&parts).map_err(|e| e.to_string())
}

fn catalog_id(text: &str) -> Result<CatalogId, String> {
    text.parse::<CatalogId>().map_err(|_| {
        let names: Vec<&str> = CatalogId::ALL.iter().map(|id| id.name()).collect();
        format!("unknown curve `{text}`; expected one of {}", names.join(", "))
    })
}
