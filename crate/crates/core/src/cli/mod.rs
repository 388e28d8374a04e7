//! Command-line front end: TOML configuration, experiment orchestration and
//! CSV/text reports.
//!
//! Exit codes: 0 when every verdict passes, 1 when a verdict fails, 2 for
//! configuration errors, 3 for solver failures and 4 for I/O errors.

mod config;
mod run;

use std::path::PathBuf;

pub use config::{parse_config, parse_config_str, ConfigError, Experiment, RunConfig, SweepConfig};
pub use run::{csv_files, fmt_num, run, solution_csv, sweep_csv, RunSummary, VerdictLine, SWEEP_HEADER};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("solver failure in {stage}: {source}")]
    Solver {
        stage: &'static str,
        #[source]
        source: crate::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }
}

#[derive(Debug, clap::Parser)]
#[command(
    name = "dphase",
    version,
    about = "Singular double-phase solver and scaling experiments"
)]
pub struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// TOML configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (overrides `[output] dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for every randomized probe (overrides `[run] seed`).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write gnuplot scripts next to the data.
    #[arg(long)]
    pub emit_plots: bool,
}

/// Parses the config, applies command-line overrides and runs.
pub fn execute(args: &Args) -> Result<RunSummary, CliError> {
    let mut cfg = parse_config(&args.config)?;
    cfg.experiment = args.experiment;
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.emit_plots |= args.emit_plots;
    run(&cfg)
}
