use std::process::ExitCode;

use clap::{Parser, Subcommand};
use logcrystal_cli::config::Overrides;
use logcrystal_cli::{run, Command};

#[derive(Debug, Parser)]
#[command(
    name = "logcrystal",
    version,
    about = "Spectra, dynamics and phase-space views of the log time crystal model"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Energy levels, neighbour gaps and the quasi-degenerate set.
    Spectrum(Overrides),
    /// Exact and closed-form return amplitude over time.
    Dynamics(Overrides),
    /// Classical energy on a (Q, P) grid.
    Landscape(Overrides),
    /// Husimi distribution of one eigenstate, plus the minimum-energy locus.
    Husimi(Overrides),
    /// Two-copy interference readout against exact overlap.
    Hom(Overrides),
}

impl Sub {
    fn split(self) -> (Command, Overrides) {
        match self {
            Sub::Spectrum(f) => (Command::Spectrum, f),
            Sub::Dynamics(f) => (Command::Dynamics, f),
            Sub::Landscape(f) => (Command::Landscape, f),
            Sub::Husimi(f) => (Command::Husimi, f),
            Sub::Hom(f) => (Command::Hom, f),
        }
    }
}

fn main() -> ExitCode {
    let (command, flags) = Cli::parse().command.split();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = flags.threads {
        pool = pool.num_threads(threads);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return ExitCode::from(3);
        }
    };
    match pool.install(|| run(command, &flags)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
