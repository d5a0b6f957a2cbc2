#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use whichway_core::Opening;

mod commands;
mod config;
mod error;
mod manifest;
mod plots;

use commands::ReconstructArgs;
use config::{Overrides, RunConfig};
use error::CliResult;

/// Simulate and analyse a scanned-aperture which-way double-slit experiment.
#[derive(Debug, Parser)]
#[command(name = "whichway", version)]
struct Cli {
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Disable shot and readout noise.
    #[arg(long, global = true)]
    no_noise: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Direct-image fringe profile at distance D.
    Fringes,
    /// Simulate the aperture scans.
    Scan {
        /// Also write every detector frame.
        #[arg(long)]
        profiles: bool,
    },
    /// Invert scan CSVs into pupil-plane profiles.
    Reconstruct {
        /// Scan CSVs; defaults to every scan_a*mm.csv in the output directory.
        inputs: Vec<PathBuf>,
        /// Aperture width for CSVs that have no JSON sidecar.
        #[arg(long)]
        width_mm: Option<f64>,
        /// Exposure for CSVs that have no JSON sidecar.
        #[arg(long)]
        exposure_s: Option<f64>,
    },
    /// Visibility, distinguishability and profile comparisons.
    Report,
    /// Matrix sizes at which the aperture matrix has full rank.
    Rank {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value = "rightward")]
        opening: Opening,
    },
    /// fringes, scan, reconstruct and report in turn.
    Run,
}

fn run(cli: Cli) -> CliResult<()> {
    if let Command::Rank { width, n_max, opening } = cli.command {
        return commands::rank(width, n_max, opening);
    }
    let overrides = Overrides {
        seed: cli.seed,
        out: cli.out,
        no_noise: cli.no_noise,
    };
    let config = RunConfig::load(cli.config.as_deref(), &overrides)?;
    match cli.command {
        Command::Fringes => commands::fringes(&config),
        Command::Scan { profiles } => commands::scan(&config, profiles),
        Command::Reconstruct {
            inputs,
            width_mm,
            exposure_s,
        } => commands::reconstruct(
            &config,
            &ReconstructArgs {
                inputs,
                width_mm,
                exposure_s,
            },
        ),
        Command::Report => commands::report(&config),
        Command::Run => {
            commands::fringes(&config)?;
            commands::scan(&config, false)?;
            commands::reconstruct(
                &config,
                &ReconstructArgs {
                    inputs: Vec::new(),
                    width_mm: None,
                    exposure_s: None,
                },
            )?;
            commands::report(&config)
        }
        Command::Rank { .. } => unreachable!(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
