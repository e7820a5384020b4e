//! `sirasym`: runs outage, asymptotic and transmission-capacity experiments
//! from JSON configs and writes CSV tables plus a run manifest.

mod commands;
mod config;
mod exit;
mod output;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use config::ExperimentConfig;
use exit::ConfigError;
use output::{sha256_hex, write_json, RunManifest};

#[derive(Debug, Parser)]
#[command(name = "sirasym", version, about = "Low-density outage and transmission-capacity experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `outputs.dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Base seed; overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; overrides `budget.threads`.
    #[arg(long, global = true, env = "SIRASYM_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Point patterns of the transmitter process over the density grid.
    Sample,
    /// Success probability over the density grid.
    SimulateOutage,
    /// Low-density constants γ and κ.
    Gamma,
    /// Regression fit of (γ, κ) from a simulated sweep.
    FitKappa,
    /// Transmission capacity over the ε grid.
    Tc,
    /// Success-probability bounds over the density grid.
    Bounds,
    /// Condition statistics over the density grid.
    Diagnostics,
    /// Canonical comparison tables; fails when a comparison is out of tolerance.
    ReferenceSuite,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::SimulateOutage => "simulate-outage",
            Command::Gamma => "gamma",
            Command::FitKappa => "fit-kappa",
            Command::Tc => "tc",
            Command::Bounds => "bounds",
            Command::Diagnostics => "diagnostics",
            Command::ReferenceSuite => "reference-suite",
        }
    }
}

fn load(cli: &Cli) -> Result<(ExperimentConfig, String)> {
    match &cli.config {
        Some(path) => {
            let bytes = std::fs::read(path)
                .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
            let text = String::from_utf8(bytes).map_err(|_| ConfigError("config is not UTF-8".into()))?;
            let cfg = ExperimentConfig::parse(&text)?;
            Ok((cfg, sha256_hex(text.as_bytes())))
        }
        None if cli.command == Command::ReferenceSuite => {
            let cfg = ExperimentConfig::reference();
            let canonical = serde_json::to_string(&cfg)?;
            Ok((cfg, sha256_hex(canonical.as_bytes())))
        }
        None => Err(ConfigError(format!("`{}` needs --config <path>", cli.command.name())).into()),
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let start = Instant::now();
    let (cfg, hash) = load(cli)?;
    let seed = cli.seed.unwrap_or(cfg.seed);
    if let Some(n) = cli.threads.or(cfg.budget.threads) {
        if n == 0 {
            return Err(ConfigError("threads must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let dir = cli
        .out
        .clone()
        .or_else(|| cfg.outputs.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let (density, epsilon) = match cli.command {
        Command::Sample | Command::SimulateOutage | Command::FitKappa | Command::Bounds | Command::Diagnostics => {
            (true, false)
        }
        Command::Tc => (false, true),
        Command::Gamma | Command::ReferenceSuite => (false, false),
    };
    commands::precheck(&cfg, density, epsilon)?;

    let run = match cli.command {
        Command::Sample => commands::sample(&cfg, seed),
        Command::SimulateOutage => commands::simulate_outage(&cfg, seed),
        Command::Gamma => commands::gamma(&cfg, seed),
        Command::FitKappa => commands::fit_kappa(&cfg, seed),
        Command::Tc => commands::tc(&cfg, seed),
        Command::Bounds => commands::bounds(&cfg, seed),
        Command::Diagnostics => commands::diagnostics(&cfg, seed),
        Command::ReferenceSuite => commands::reference_suite(&cfg, seed),
    }
    .with_context(|| format!("running `{}`", cli.command.name()))?;

    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let outputs = run.write(&dir)?;
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name().into(),
        config_sha256: hash,
        seed,
        threads: rayon::current_num_threads(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs,
        row_seeds: run.row_seeds,
    };
    write_json(&dir, "manifest.json", &manifest)?;
    if let Some(f) = run.failure {
        return Err(f.into());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::code_for(&e))
        }
    }
}
