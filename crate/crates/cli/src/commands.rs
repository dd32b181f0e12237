use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qmcbench::discrepancy::l2_sweep;
use qmcbench::functions::{Integrand, TestFunction};
use qmcbench::integrate::{rmse_experiment, sample_points, single_run_convergence, ConvergenceReport, SamplerSpec};
use qmcbench::io::{
    write_convergence_csv, write_points_csv, write_quantile_csv, write_segments_csv, write_single_run_csv,
    write_sweep_csv, SingleRun,
};
use qmcbench::quantile::{quantile_rmse_experiment, QuantileExperiment};
use qmcbench::sensitivity::sensitivity_report;
use qmcbench::sobol::{segment_checks, DirectionTable};

use crate::args::{ConvergeArgs, DiscrepancyArgs, GenArgs, IntegrateArgs, QuantileArgs, SensitivityArgs, VerifyArgs};
use crate::output::emit;

/// Report paths written by a command, primary report first.
pub type Outputs = Vec<PathBuf>;

fn written(path: Option<&PathBuf>) -> Outputs {
    path.cloned().into_iter().collect()
}

pub fn gen(args: &GenArgs, table: &DirectionTable) -> Result<Outputs> {
    let spec = SamplerSpec::new(args.sampler, args.dim)
        .with_table(table)
        .with_seed(args.seed.unwrap_or(1))
        .with_start_index(args.skip.unwrap_or(0));
    let points = sample_points(&spec, args.count)?;
    emit(args.output.as_deref(), |w| Ok(write_points_csv(w, &points)?))?;
    Ok(written(args.output.as_ref()))
}

pub fn discrepancy(args: &DiscrepancyArgs, table: &DirectionTable) -> Result<Outputs> {
    let range = qmcbench::integrate::Log2Range::new(args.log2n_min, args.log2n_max)?;
    let mut rows = Vec::new();
    for &method in &args.sampler {
        let spec = SamplerSpec::new(method, args.dim).with_table(table).with_seed(args.seed);
        rows.extend(l2_sweep(&spec, range, args.replicates)?);
    }
    emit(args.output.as_deref(), |w| Ok(write_sweep_csv(w, &rows)?))?;
    Ok(written(args.output.as_ref()))
}

pub fn verify(args: &VerifyArgs, table: &DirectionTable) -> Result<Outputs> {
    let rows = segment_checks(table, args.property, args.dim, args.segments)?;
    emit(args.output.as_deref(), |w| Ok(write_segments_csv(w, &rows)?))?;
    Ok(written(args.output.as_ref()))
}

pub fn integrate(args: &IntegrateArgs, table: &DirectionTable) -> Result<Outputs> {
    let f = &args.function;
    anyhow::ensure!(args.replicates >= 2, "at least 2 replicates are required, got {}", args.replicates);
    let mut reports: Vec<ConvergenceReport> = Vec::new();
    for &method in &args.methods {
        let spec = SamplerSpec::new(method, f.dim()).with_table(table).with_seed(args.seed);
        let report = rmse_experiment(f, &f.label(), f.exact_integral(), &spec, args.log2n, args.replicates)
            .with_context(|| format!("{method} on {}", f.label()))?;
        reports.push(report);
    }
    emit(args.output.as_deref(), |w| Ok(write_convergence_csv(w, &reports)?))?;

    let slopes = args.slopes.clone().or_else(|| args.output.as_ref().map(|p| p.with_extension("slopes.json")));
    let write_slopes = |w: &mut dyn Write| -> Result<()> {
        serde_json::to_writer_pretty(&mut *w, &reports)?;
        writeln!(w)?;
        Ok(())
    };
    match &slopes {
        Some(path) => crate::output::write_atomic(path, write_slopes)?,
        None => write_slopes(&mut std::io::stderr())?,
    }
    let mut out = written(args.output.as_ref());
    out.extend(slopes);
    Ok(out)
}

pub fn converge(args: &ConvergeArgs, table: &DirectionTable) -> Result<Outputs> {
    let f: &TestFunction = &args.function;
    let label = f.label();
    let mut runs = Vec::new();
    for &method in &args.methods {
        let spec = SamplerSpec::new(method, f.dim()).with_table(table).with_seed(args.seed);
        runs.push((method, single_run_convergence(f, &spec, args.log2n)?));
    }
    let runs: Vec<SingleRun<'_>> = runs
        .iter()
        .map(|(method, estimates)| SingleRun {
            method: *method,
            function: &label,
            dim: f.dim(),
            exact: f.exact_integral(),
            estimates,
        })
        .collect();
    emit(args.output.as_deref(), |w| Ok(write_single_run_csv(w, &runs)?))?;
    Ok(written(args.output.as_ref()))
}

pub fn sensitivity(args: &SensitivityArgs, table: &DirectionTable) -> Result<Outputs> {
    let f = &args.function;
    let spec = SamplerSpec::new(args.sampler, f.dim()).with_table(table).with_seed(args.seed);
    let report = sensitivity_report(f, &f.label(), args.base_n, &spec, args.threshold)?;
    emit(args.output.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &report)?;
        writeln!(w)?;
        Ok(())
    })?;
    Ok(written(args.output.as_ref()))
}

pub fn quantile(args: &QuantileArgs, table: &DirectionTable) -> Result<Outputs> {
    let exp = QuantileExperiment::new(args.dim, &args.levels)?.with_range(args.log2n).with_replicates(args.replicates);
    let mut levels = Vec::new();
    for &method in &args.methods {
        let spec = SamplerSpec::new(method, args.dim).with_table(table).with_seed(args.seed);
        levels.extend(quantile_rmse_experiment(&exp, &spec)?);
    }
    emit(args.output.as_deref(), |w| Ok(write_quantile_csv(w, &levels)?))?;
    Ok(written(args.output.as_ref()))
}

pub fn load_table(path: Option<&Path>) -> Result<TableSource> {
    match path {
        Some(p) => Ok(TableSource::File(
            DirectionTable::from_path(p).with_context(|| format!("cannot load direction table {}", p.display()))?,
        )),
        None => Ok(TableSource::Bundled),
    }
}

pub enum TableSource {
    Bundled,
    File(DirectionTable),
}

impl TableSource {
    pub fn table(&self) -> &DirectionTable {
        match self {
            TableSource::Bundled => DirectionTable::bundled(),
            TableSource::File(t) => t,
        }
    }
}
