//! `minreg`: membership queries, boundary tracing, and empirical
//! verification of minimizer regions for sums of two strongly convex
//! functions.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use minreg_cli::commands::{cmd_member, cmd_report, cmd_trace, cmd_verify, EXIT_INPUT};
use minreg_cli::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "minreg",
    version,
    about = "Minimizer-region estimation for sums of two strongly convex functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate region membership of a point.
    Member {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated coordinates in the original frame, e.g. "0.5,1".
        #[arg(long)]
        point: String,
    },
    /// Trace the region boundary and write it to files.
    Trace {
        #[arg(long)]
        config: PathBuf,
        /// Grid resolution override (cells per axis).
        #[arg(long)]
        resolution: Option<usize>,
        /// Output format(s) when the config lists no outputs: csv, json, svg.
        #[arg(long)]
        format: Vec<String>,
    },
    /// Sample random witness pairs and verify region containment.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare region area against the hull of observed minimizers.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        resolution: Option<usize>,
    },
}

fn init_thread_pool() {
    if let Ok(value) = std::env::var("MINREG_THREADS") {
        match value.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => eprintln!("warning: ignoring invalid MINREG_THREADS value '{value}'"),
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let config_path = match &cli.command {
        Command::Member { config, .. }
        | Command::Trace { config, .. }
        | Command::Verify { config, .. }
        | Command::Report { config, .. } => config.clone(),
    };
    let cfg = match RunConfig::load(&config_path) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let code = match cli.command {
        Command::Member { point, .. } => cmd_member(&cfg, &point),
        Command::Trace {
            resolution, format, ..
        } => cmd_trace(&cfg, resolution, &format),
        Command::Verify { samples, seed, .. } => cmd_verify(&cfg, samples, seed),
        Command::Report {
            samples,
            seed,
            resolution,
            ..
        } => cmd_report(&cfg, samples, seed, resolution),
    };
    ExitCode::from(code as u8)
}
