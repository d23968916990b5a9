//! Library side of the `logcrystal` binary: config resolution, commands and output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::commands::Output;
use crate::config::{Format, Overrides, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Dynamics,
    Landscape,
    Husimi,
    Hom,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Dynamics => "dynamics",
            Command::Landscape => "landscape",
            Command::Husimi => "husimi",
            Command::Hom => "hom",
        }
    }

    pub fn execute(self, config: &RunConfig) -> Result<Output, CliError> {
        match self {
            Command::Spectrum => commands::spectrum(config),
            Command::Dynamics => commands::dynamics(config),
            Command::Landscape => commands::landscape(config),
            Command::Husimi => commands::husimi_grid(config),
            Command::Hom => commands::hom(config),
        }
    }
}

/// `out.csv` -> `out.locus.csv`.
pub fn companion_path(path: &Path, infix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{infix}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{infix}"),
    };
    path.with_file_name(name)
}

fn write_to(
    path: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut out = BufWriter::new(File::create(p)?);
            write(&mut out)?;
            out.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            write(&mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Resolves the config, runs the command and writes its tables.
pub fn run(command: Command, flags: &Overrides) -> Result<(), CliError> {
    let config = RunConfig::resolve(flags)?;
    let output = command.execute(&config)?;
    let format: Format = config.output.format;
    let path = config.output.path.as_deref();
    write_to(path, |out| {
        output.main.write(out, command.name(), &config, format)
    })?;
    if let Some((infix, table)) = &output.companion {
        match path {
            Some(p) => {
                let target = companion_path(p, infix);
                write_to(Some(&target), |out| {
                    table.write(out, command.name(), &config, format)
                })?;
            }
            None => eprintln!("warning: no --out given, {infix} table not written"),
        }
    }
    Ok(())
}
