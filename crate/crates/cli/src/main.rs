//! `ansl <command> --config <path> [--out <dir>] [--plots] [--threads N]`
//!
//! Exit codes: 0 when every check passes, 2 when a check fails, 1 on errors.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::RunConfig;
use output::OutputDir;

#[derive(Parser)]
#[command(
    name = "ansl",
    version,
    about = "Boundary jets, Gauss-Codazzi integration and estimate checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (JSON, `schema: 1`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `out` in the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    plots: bool,
    /// Worker threads.
    #[arg(long, global = true, env = "ANSL_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Check the boundary conditions of a chart.
    Validate,
    /// Boundary Taylor jets of L, M, N and H.
    Jet,
    /// Integrate the Gauss-Codazzi system from the boundary.
    Integrate,
    /// Run the estimate suite over the configured resolutions.
    Verify,
    /// Convergence and norm-ratio study for the degenerate model problem.
    Degenerate,
    /// Aggregate earlier runs into Markdown and HTML.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Jet => "jet",
            Command::Integrate => "integrate",
            Command::Verify => "verify",
            Command::Degenerate => "degenerate",
            Command::Report => "report",
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let config_path = cli.config.context("--config <path> is required")?;
    let mut cfg = RunConfig::load(&config_path)?;
    cfg.plots |= cli.plots;

    let threads = cli.threads.unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("cannot start the worker pool")?;

    let out_dir = cli
        .out
        .or_else(|| cfg.out.as_ref().map(|p| cfg.resolve(p)))
        .unwrap_or_else(|| PathBuf::from("ansl-out"));
    let mut out = OutputDir::acquire(&out_dir)?;
    let pass = match cli.command {
        Command::Validate => commands::validate(&cfg, &mut out),
        Command::Jet => commands::jet(&cfg, &mut out),
        Command::Integrate => commands::integrate_cmd(&cfg, &mut out),
        Command::Verify => commands::verify(&cfg, &mut out),
        Command::Degenerate => commands::degenerate(&cfg, &mut out),
        Command::Report => commands::report(&cfg, &mut out),
    }?;
    out.finish(cli.command.name(), pass, rayon::current_num_threads())?;
    Ok(pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
