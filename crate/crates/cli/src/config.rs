//! TOML run configuration. Rationals are strings such as `"3/2"` so they stay exact.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use grs_core::algebra::parse::{parse_laurent, parse_poly};
use grs_core::algebra::{parse_rational, to_f64, Rational};
use grs_core::dynamics::Params;
use grs_core::integrals::{factorization_seed, MomPoly, Seed};
use grs_core::orbit::{build_orbit, ExtVector, OrbitData, OrbitSpec};
use grs_core::superpotential::ExpSum;
use serde::Deserialize;

use crate::args::ParamArgs;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub orbit: Option<OrbitSpec>,
    #[serde(default)]
    pub params: ParamsSpec,
    pub superpotential: Option<SuperpotentialSpec>,
    pub integral: Option<IntegralSpec>,
    pub flow: Option<FlowSpec>,
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub tau: Option<String>,
    pub epsilon: Option<String>,
    #[serde(rename = "E")]
    pub e: Option<String>,
    #[serde(rename = "C")]
    pub c: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperpotentialSpec {
    /// Explicit candidate exponents; replaces the generated set.
    pub candidates: Option<Vec<Vec<String>>>,
    /// Extra exponents added to the generated set.
    #[serde(default)]
    pub augment: Vec<Vec<String>>,
    /// `"formal"` (default) or `"zero"`.
    pub energy: Option<String>,
    pub max_candidates: Option<usize>,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
    /// Numeric values of the free parameters `a, b, …`.
    #[serde(default)]
    pub free: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub c: Vec<String>,
    pub coeff: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegralSpec {
    pub seed_c: Option<Vec<String>>,
    /// Defaults to `θψ` from the factorization of `J` when available.
    pub f_c: Option<String>,
    pub psi_c: Option<String>,
    pub levels: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    /// `(q, u, p, φ)` for the canonical flow, `(q, u)` for a subsystem.
    pub init: Option<Vec<f64>>,
    pub tspan: Option<[f64; 2]>,
    pub tol: Option<f64>,
    pub points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid configuration {}", path.display()))
    }

    pub fn orbit(&self) -> Result<OrbitData> {
        let spec = self.orbit.as_ref().ok_or_else(|| anyhow!("configuration has no [orbit] table"))?;
        build_orbit(spec).context("invalid [orbit]")
    }

    /// Flag value first, then `[output] csv`.
    pub fn out_path(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.output.as_ref().and_then(|o| o.csv.clone()))
    }

    /// `τ = 1`, `ε = 0` and `E = 1` unless given; `C` alone fixes `E`.
    pub fn params(&self, n: u32, flags: &ParamArgs) -> Result<Params> {
        let p = &self.params;
        let tau = rational_or(p.tau.as_deref(), "params.tau", 1.0)?;
        let epsilon = match &flags.epsilon {
            Some(q) => to_f64(q),
            None => rational_or(p.epsilon.as_deref(), "params.epsilon", 0.0)?,
        };
        let e = match &flags.e {
            Some(q) => Some(to_f64(q)),
            None => p.e.as_deref().map(|t| rational_field(t, "params.E")).transpose()?,
        };
        // an E flag replaces both config entries
        let c =
            if flags.e.is_some() { None } else { p.c.as_deref().map(|t| rational_field(t, "params.C")).transpose()? };
        let params = match (e, c) {
            (Some(e), Some(c)) => Params::with_both(n, tau, epsilon, e, c),
            (None, Some(c)) => Params::from_c(n, tau, epsilon, c),
            (e, None) => Params::new(n, tau, epsilon, e.unwrap_or(1.0)),
        };
        params.context("invalid [params]")
    }

    pub fn superpotential(&self) -> Result<&SuperpotentialSpec> {
        self.superpotential.as_ref().ok_or_else(|| anyhow!("configuration has no [superpotential] table"))
    }

    pub fn flow(&self) -> FlowSpec {
        let f = self.flow.as_ref();
        FlowSpec {
            init: f.and_then(|f| f.init.clone()),
            tspan: f.and_then(|f| f.tspan),
            tol: f.and_then(|f| f.tol),
            points: f.and_then(|f| f.points),
        }
    }

    /// Seed level from flags and `[integral]`; `F_c` falls back to `θψ`.
    pub fn seed(&self, orbit: &OrbitData, seed_level: Option<&ExtVector>) -> Result<Seed> {
        let spec = self.integral.as_ref();
        let names = orbit.momentum_names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let poly = |text: &str, key: &str| -> Result<MomPoly> {
            parse_poly(text, &refs).map_err(|e| anyhow!("integral.{key}: {e}"))
        };
        let psi = poly(spec.and_then(|s| s.psi_c.as_deref()).unwrap_or("1"), "psi_c")?;
        let given_c = match seed_level {
            Some(c) => Some(c.clone()),
            None => spec
                .and_then(|s| s.seed_c.as_ref())
                .map(|c| ExtVector::parse(c))
                .transpose()
                .context("integral.seed_c")?,
        };
        let f_c = spec.and_then(|s| s.f_c.as_deref()).map(|t| poly(t, "f_c")).transpose()?;
        match (given_c, f_c) {
            (Some(c), Some(f_c)) => Ok(Seed { c, f_c, psi_c: psi }),
            (c, None) => {
                let fac = factorization_seed(orbit)
                    .map_err(|e| anyhow!("no f_c given and J does not factor ({e}); set integral.f_c"))?;
                if let Some(c) = c {
                    if c != fac.c {
                        bail!("seed level {c} differs from the factorization level {}; set integral.f_c", fac.c);
                    }
                }
                Ok(fac.seed(psi))
            }
            (None, Some(_)) => bail!("integral.f_c needs a seed level (--seed-level or integral.seed_c)"),
        }
    }

    pub fn levels(&self, flag: Option<usize>) -> usize {
        flag.or_else(|| self.integral.as_ref().and_then(|s| s.levels)).unwrap_or(4)
    }
}

impl SuperpotentialSpec {
    pub fn terms(&self, orbit: &OrbitData) -> Result<ExpSum> {
        if self.terms.is_empty() {
            bail!("[superpotential] has no terms");
        }
        let mut f = ExpSum::new();
        for (i, t) in self.terms.iter().enumerate() {
            let c = ExtVector::parse(&t.c).with_context(|| format!("superpotential.terms[{i}].c"))?;
            orbit.check_len(&c).with_context(|| format!("superpotential.terms[{i}].c"))?;
            let coeff = parse_laurent(&t.coeff).map_err(|e| anyhow!("superpotential.terms[{i}].coeff: {e}"))?;
            f.add_term(c, coeff);
        }
        Ok(f)
    }

    pub fn vectors(list: &[Vec<String>], key: &str, orbit: &OrbitData) -> Result<Vec<ExtVector>> {
        list.iter()
            .enumerate()
            .map(|(i, v)| {
                let c = ExtVector::parse(v).with_context(|| format!("superpotential.{key}[{i}]"))?;
                orbit.check_len(&c).with_context(|| format!("superpotential.{key}[{i}]"))?;
                Ok(c)
            })
            .collect()
    }
}

fn rational_field(text: &str, key: &str) -> Result<f64> {
    let q: Rational = parse_rational(text).ok_or_else(|| anyhow!("{key}: `{text}` is not an exact rational"))?;
    Ok(to_f64(&q))
}

fn rational_or(text: Option<&str>, key: &str, default: f64) -> Result<f64> {
    text.map(|t| rational_field(t, key)).transpose().map(|v| v.unwrap_or(default))
}
