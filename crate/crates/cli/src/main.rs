mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use qmcbench::integrate::Method;

use args::{Cli, Command};
use output::{manifest_path, RunManifest};

fn usage_error(message: &str) -> ! {
    Cli::command().error(ErrorKind::ArgumentConflict, message).exit()
}

// Checks clap cannot express: which sampler a seed or skip belongs to.
fn validate(command: &Command) {
    if let Command::Gen(a) = command {
        match (a.sampler, a.seed, a.skip) {
            (Method::Qmc, Some(_), _) => usage_error("--seed does not apply to the sobol sampler; use --skip"),
            (m, _, Some(_)) if m != Method::Qmc => usage_error("--skip applies only to the sobol sampler"),
            _ => {}
        }
    }
}

fn seed_of(command: &Command) -> Option<u64> {
    match command {
        Command::Gen(a) => (a.sampler != Method::Qmc).then_some(a.seed.unwrap_or(1)),
        Command::Discrepancy(a) => Some(a.seed),
        Command::Verify(_) => None,
        Command::Integrate(a) => Some(a.seed),
        Command::Converge(a) => Some(a.seed),
        Command::Sensitivity(a) => Some(a.seed),
        Command::Quantile(a) => Some(a.seed),
    }
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let source = commands::load_table(cli.directions.as_deref())?;
    let table = source.table();
    let outputs = match &cli.command {
        Command::Gen(a) => commands::gen(a, table)?,
        Command::Discrepancy(a) => commands::discrepancy(a, table)?,
        Command::Verify(a) => commands::verify(a, table)?,
        Command::Integrate(a) => commands::integrate(a, table)?,
        Command::Converge(a) => commands::converge(a, table)?,
        Command::Sensitivity(a) => commands::sensitivity(a, table)?,
        Command::Quantile(a) => commands::quantile(a, table)?,
    };
    if let Some(report) = cli.command.output() {
        let manifest = RunManifest {
            tool: "qmcbench",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: cli.command.name(),
            argv: std::env::args().skip(1).collect(),
            options: &cli.command,
            seed: seed_of(&cli.command),
            directions: cli.directions.as_ref().map_or_else(|| "bundled".into(), |p| p.display().to_string()),
            outputs,
        };
        manifest.write(&manifest_path(report))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    validate(&cli.command);
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
