use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

/// Flags shared by every subcommand. All are optional here so that a config
/// file can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Offset α, as a decimal or `p/q`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Slope β > 2, as a decimal or `p/q`. Two rational strings select exact arithmetic.
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Comparison tolerance of the float backend.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Word length (orbit, language, entropy growth).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Diagram depth.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Depth of the weak* distance.
    #[arg(long = "M", global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key = value` file; explicit flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for the parallel parts. Outputs do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Measure: `parry:base`, `parry:<ids>`, `periodic:<cycle>`,
    /// weighted sums like `0.5*parry:1,2+0.5*periodic:2`, or `@FILE` with records.
    #[arg(long, global = true)]
    pub measure: Option<String>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Number of outer blocks of the generic-point schedule.
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    /// Initial switching rate.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Prefix length the schedule is materialized to.
    #[arg(long, global = true)]
    pub target: Option<usize>,
    /// Half-width of the entropy bracket (defaults to `eps`).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
}

/// Validated run configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub alpha: String,
    pub beta: String,
    pub tol: f64,
    pub n: Option<usize>,
    pub depth: Option<usize>,
    pub m: Option<usize>,
    pub seed: u64,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub threads: Option<usize>,
    pub measure: Option<String>,
    pub eps: Option<f64>,
    pub levels: Option<usize>,
    pub delta: Option<f64>,
    pub target: Option<usize>,
    pub tolerance: Option<f64>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("config {}: {}", path.display(), e)))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key = value", i + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn fill<T: FromStr>(slot: &mut Option<T>, map: &mut BTreeMap<String, String>, key: &str) -> Result<(), CliError> {
    if let Some(v) = map.remove(key) {
        if slot.is_none() {
            *slot = Some(v.parse().map_err(|_| invalid(format!("config key {}: bad value {:?}", key, v)))?);
        }
    }
    Ok(())
}

fn check<T: PartialOrd + std::fmt::Display + Copy>(name: &str, v: Option<T>, lo: T, hi: T) -> Result<(), CliError> {
    match v {
        Some(x) if !(x >= lo && x <= hi) => Err(invalid(format!("--{} = {} outside [{}, {}]", name, x, lo, hi))),
        _ => Ok(()),
    }
}

fn check_open(name: &str, v: Option<f64>, lo: f64, hi: f64) -> Result<(), CliError> {
    match v {
        Some(x) if !(x > lo && x < hi) => Err(invalid(format!("--{} = {} outside ({}, {})", name, x, lo, hi))),
        _ => Ok(()),
    }
}

impl RunConfig {
    /// Merges the config file (if any) under the flags and range-checks
    /// every numeric value.
    pub fn resolve(mut a: RunArgs) -> Result<Self, CliError> {
        if let Some(path) = a.config.clone() {
            let mut map = read_config(&path)?;
            fill(&mut a.alpha, &mut map, "alpha")?;
            fill(&mut a.beta, &mut map, "beta")?;
            fill(&mut a.tol, &mut map, "tol")?;
            fill(&mut a.n, &mut map, "n")?;
            fill(&mut a.depth, &mut map, "depth")?;
            fill(&mut a.m, &mut map, "M")?;
            fill(&mut a.seed, &mut map, "seed")?;
            fill(&mut a.format, &mut map, "format")?;
            fill(&mut a.out, &mut map, "out")?;
            fill(&mut a.threads, &mut map, "threads")?;
            fill(&mut a.measure, &mut map, "measure")?;
            fill(&mut a.eps, &mut map, "eps")?;
            fill(&mut a.levels, &mut map, "levels")?;
            fill(&mut a.delta, &mut map, "delta")?;
            fill(&mut a.target, &mut map, "target")?;
            fill(&mut a.tolerance, &mut map, "tolerance")?;
            if let Some(k) = map.keys().next() {
                return Err(invalid(format!("unknown config key {:?}", k)));
            }
        }
        let alpha = a.alpha.ok_or_else(|| invalid("--alpha is required"))?;
        let beta = a.beta.ok_or_else(|| invalid("--beta is required"))?;
        check_open("tol", a.tol, 0.0, 1e-3)?;
        check("n", a.n, 1, 40)?;
        check("depth", a.depth, 1, 64)?;
        check("M", a.m, 1, 12)?;
        check("threads", a.threads, 1, 256)?;
        check_open("eps", a.eps, 0.0, 1.0)?;
        check("levels", a.levels, 1, 6)?;
        check_open("delta", a.delta, 0.0, 0.5)?;
        check("target", a.target, 1, 1_000_000)?;
        check_open("tolerance", a.tolerance, 0.0, 1.0)?;
        Ok(Self {
            alpha,
            beta,
            tol: a.tol.unwrap_or(1e-12),
            n: a.n,
            depth: a.depth,
            m: a.m,
            seed: a.seed.unwrap_or(0),
            format: a.format.unwrap_or(Format::Text),
            out: a.out,
            threads: a.threads,
            measure: a.measure,
            eps: a.eps,
            levels: a.levels,
            delta: a.delta,
            target: a.target,
            tolerance: a.tolerance,
        })
    }
}
