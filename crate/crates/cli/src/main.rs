use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use curvepipe_cli::commands::{self, Options};
use curvepipe_cli::config::RunConfig;
use curvepipe_cli::pipeline::Pipeline;

#[derive(Parser)]
#[command(
    name = "curvepipe",
    version,
    about = "Asymptotic flow in curved pipes with moving walls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: output.dir from the config, else ./out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Truncation order of the exported expansion
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(0..=2))]
    order: Option<u8>,
    /// Drop all time derivatives
    #[arg(long, global = true)]
    steady: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Full pipeline: fields, plots and verification report
    Solve,
    /// Sample and export fields only
    Fields,
    /// Conservation, compatibility and residual checks
    Verify,
    /// Check the Stokes coefficient tables against a direct solve
    Tables,
    /// Parameter grid over curvature, torsion and eps
    Sweep,
}

fn run(cli: &Cli) -> Result<bool> {
    if let Command::Tables = cli.command {
        let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
        return commands::tables(&out);
    }
    let path = cli.config.as_ref().context("--config is required")?;
    let cfg = RunConfig::load(path)?;
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let opts = Options {
        out: &out,
        order: cli.order.map_or(cfg.output.order, usize::from),
        steady: cli.steady || cfg.time.steady,
    };
    let tag = || format!("config {}", path.display());
    if let Command::Sweep = cli.command {
        commands::sweep(&cfg, &opts).with_context(tag)?;
        return Ok(true);
    }
    let pipeline = Pipeline::run(&cfg, opts.steady, None).with_context(tag)?;
    match cli.command {
        Command::Solve => commands::solve(&cfg, &pipeline, &opts),
        Command::Fields => commands::fields(&cfg, &pipeline, &opts).map(|_| true),
        Command::Verify => commands::verify(&pipeline, &opts),
        Command::Tables | Command::Sweep => unreachable!(),
    }
    .with_context(tag)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are errors, not failed checks
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
