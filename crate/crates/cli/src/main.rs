use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nanofiber_cli::{run, Command, Options, Outcome};

/// Guided-mode environment of an optical nanofiber and non-Markovian
/// two-atom dynamics.
#[derive(Parser)]
#[command(name = "nanofiber", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// JSON run configuration; defaults are used for missing fields.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Dispersion cache directory (overrides the config).
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Worker threads for independent cases.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    /// Reserved. Nothing here is random, so the flag is rejected.
    #[arg(long, global = true, hide = true)]
    seedless: bool,
}

#[derive(Subcommand)]
enum Sub {
    /// Propagation constant and velocities.
    Dispersion,
    /// One- and two-point spectral densities.
    Spectrum,
    /// Correlation functions with peak diagnostics.
    Correlations,
    /// Two-atom evolutions and analysis reports.
    Evolve,
    /// Radius x separation x model sweep of the collective rates.
    Sweep,
    /// Time-dependent rates and establishment times.
    Analyze,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.seedless {
        eprintln!("error: --seedless is reserved; no command draws random numbers");
        return ExitCode::from(2);
    }
    let command = match cli.command {
        Sub::Dispersion => Command::Dispersion,
        Sub::Spectrum => Command::Spectrum,
        Sub::Correlations => Command::Correlations,
        Sub::Evolve => Command::Evolve,
        Sub::Sweep => Command::Sweep,
        Sub::Analyze => Command::Analyze,
    };
    let options = Options {
        config: cli.config,
        out: cli.out,
        cache: cli.cache,
        jobs: cli.jobs,
    };
    match run(command, &options) {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::PartialFailure(n)) => {
            eprintln!("error: {n} sweep case(s) failed; see sweep.csv");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(nanofiber_cli::exit_code(&e))
        }
    }
}
