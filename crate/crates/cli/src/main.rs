//! `katolab`: conformity tables, ellipticity constants, randomized Kato checks
//! and field runs from the command line.
//!
//! Exit status is 0 when every check passes, 1 on a violation and 2 on a
//! configuration error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Common, EllipticityArgs, FieldArgs, FuzzArgs, Outcome, SideFile, SuiteArgs, VerifyArgs};
use config::Config;
use output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("configuration error: {0}")]
    Lab(#[from] katolab::Error),
    #[error("output error: {0}")]
    Io(String),
}

#[derive(Debug, Parser)]
#[command(name = "katolab", version, about = "Verification lab for extended Kato inequalities")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Run batches on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Conformal projection catalog.
    Projections {
        #[command(subcommand)]
        action: ProjectionsCommand,
    },
    /// Ellipticity constant of a catalog operator.
    Ellipticity(EllipticityArgs),
    /// Randomized checks of the Kato inequalities.
    Kato {
        #[command(subcommand)]
        action: KatoCommand,
    },
    /// Checks on sections over flat tori.
    Field {
        #[command(subcommand)]
        action: FieldCommand,
    },
    /// Everything at once.
    Suite {
        #[command(subcommand)]
        action: SuiteCommand,
    },
}

#[derive(Debug, Subcommand)]
enum ProjectionsCommand {
    /// Certify `P P* = ρ² id` for every constructor.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
enum KatoCommand {
    Fuzz(FuzzArgs),
}

#[derive(Debug, Subcommand)]
enum FieldCommand {
    Run(FieldArgs),
}

#[derive(Debug, Subcommand)]
enum SuiteCommand {
    All(SuiteArgs),
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let format = cfg.pick(cli.format, "format", Format::Json)?;
    let sequential = cli.sequential || cfg.get::<bool>("sequential")?.unwrap_or(false);
    let common = Common {
        seed: cli.seed,
        tolerance: cli.tolerance,
        execution: if sequential { katolab::Execution::Sequential } else { katolab::Execution::default() },
    };
    let csv = format == Format::Csv;
    let outcome: Outcome = match &cli.command {
        Command::Projections { action: ProjectionsCommand::Verify(a) } => {
            commands::projections_verify(a, &common, &cfg)?
        }
        Command::Ellipticity(a) => commands::ellipticity(a, &common, &cfg)?,
        Command::Kato { action: KatoCommand::Fuzz(a) } => commands::kato_fuzz(a, &common, &cfg, csv)?,
        Command::Field { action: FieldCommand::Run(a) } => commands::field_run(a, &common, &cfg)?,
        Command::Suite { action: SuiteCommand::All(a) } => commands::suite_all(a, &common, &cfg)?,
    };
    for side in &outcome.sides {
        match side {
            SideFile::Csv(path, table) => output::write_side_csv(path, table)?,
            SideFile::JsonLines(path, lines) => output::write_json_lines(path, lines)?,
        }
    }
    let mut out = output::open(cli.out.as_deref())?;
    match format {
        Format::Json => output::write_json(&mut out, &outcome.header, &outcome.result)?,
        Format::Csv => output::write_csv(&mut out, &outcome.header, &outcome.table)?,
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))?;
    if let Some(f) = &outcome.failure {
        eprintln!("katolab: first failure: {f}");
    }
    Ok(outcome.header.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("katolab: {e}");
            ExitCode::from(2)
        }
    }
}
