use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qmcbench::functions::TestFunction;
use qmcbench::integrate::{Log2Range, Method};
use qmcbench::sobol::Property;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "qmcbench", version, about = "Sampling, discrepancy and quadrature benchmarks")]
pub struct Cli {
    /// Direction-number table in the Joe-Kuo text format (default: bundled 1111-dimension table).
    #[arg(long, env = "QMC_DIRECTIONS", global = true, value_name = "FILE")]
    pub directions: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Write a point set as CSV.
    Gen(GenArgs),
    /// L2 discrepancy against N for one or more samplers.
    Discrepancy(DiscrepancyArgs),
    /// Check Property A or A' on consecutive Sobol' segments.
    Verify(VerifyArgs),
    /// RMSE over replicates and fitted convergence slopes.
    Integrate(IntegrateArgs),
    /// Estimates along a single sample path.
    Converge(ConvergeArgs),
    /// Sensitivity indices, effective dimensions and type class.
    Sensitivity(SensitivityArgs),
    /// RMSE of chi-square quantile estimates.
    Quantile(QuantileArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Discrepancy(_) => "discrepancy",
            Command::Verify(_) => "verify",
            Command::Integrate(_) => "integrate",
            Command::Converge(_) => "converge",
            Command::Sensitivity(_) => "sensitivity",
            Command::Quantile(_) => "quantile",
        }
    }

    pub fn output(&self) -> Option<&PathBuf> {
        match self {
            Command::Gen(a) => a.output.as_ref(),
            Command::Discrepancy(a) => a.output.as_ref(),
            Command::Verify(a) => a.output.as_ref(),
            Command::Integrate(a) => a.output.as_ref(),
            Command::Converge(a) => a.output.as_ref(),
            Command::Sensitivity(a) => a.output.as_ref(),
            Command::Quantile(a) => a.output.as_ref(),
        }
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub sampler: Method,
    #[arg(long, value_parser = positive)]
    pub dim: usize,
    #[arg(long, value_parser = positive)]
    pub count: usize,
    /// Seed for mc, lhs and maxmin-lhs.
    #[arg(long, conflicts_with = "skip")]
    pub seed: Option<u64>,
    /// First Sobol' index (sobol only; default 0).
    #[arg(long)]
    pub skip: Option<u64>,
    /// Report file (default: stdout, no manifest).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DiscrepancyArgs {
    /// Comma-separated samplers.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sampler: Vec<Method>,
    #[arg(long, value_parser = positive)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub log2n_min: u32,
    #[arg(long)]
    pub log2n_max: u32,
    #[arg(long, default_value_t = 20, value_parser = positive)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// A or Aprime.
    #[arg(long)]
    pub property: Property,
    #[arg(long, value_parser = positive)]
    pub dim: usize,
    #[arg(long, default_value_t = 16)]
    pub segments: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct IntegrateArgs {
    /// Test function as <id>:<dim>, e.g. 1A:360.
    #[arg(long)]
    pub function: TestFunction,
    #[arg(long, value_delimiter = ',', default_value = "mc,lhs,sobol")]
    pub methods: Vec<Method>,
    /// Checkpoints as min..max powers of two.
    #[arg(long, default_value = "6..16")]
    pub log2n: Log2Range,
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Slope JSON (default: next to the CSV, or stderr when writing to stdout).
    #[arg(long)]
    pub slopes: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub function: TestFunction,
    #[arg(long, value_delimiter = ',', default_value = "mc,lhs,sobol")]
    pub methods: Vec<Method>,
    #[arg(long, default_value = "0..16")]
    pub log2n: Log2Range,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SensitivityArgs {
    #[arg(long)]
    pub function: TestFunction,
    /// Base sample size N; the run costs about N (2 + 2n) evaluations.
    #[arg(long, default_value_t = 8192)]
    pub base_n: usize,
    #[arg(long, default_value = "sobol")]
    pub sampler: Method,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Variance fraction for the effective dimensions.
    #[arg(long, default_value_t = 0.99)]
    pub threshold: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct QuantileArgs {
    #[arg(long, default_value_t = 5, value_parser = positive)]
    pub dim: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.95")]
    pub levels: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "mc,lhs,sobol")]
    pub methods: Vec<Method>,
    #[arg(long, default_value = "6..14")]
    pub log2n: Log2Range,
    #[arg(long, default_value_t = 25)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
