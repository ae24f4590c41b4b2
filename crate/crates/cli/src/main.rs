//! Experiment harness for Toeplitz-operator and multiplicity studies on
//! bounded symmetric domains. Runs a TOML config or shipped preset, writes
//! a deterministic report, and exits 0/1/2 on pass/fail/invalid-input.

mod config;
mod experiments;
mod presets;
mod report;

use clap::{Parser, Subcommand};
use config::{ConfigError, ExperimentConfig};
use experiments::CliError;
use report::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bergman",
    about = "Reproducible experiments on weighted Bergman spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Path to a TOML experiment config.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,

    /// Name of a shipped preset (see list-presets).
    #[arg(long)]
    preset: Option<String>,

    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Override the experiment's random seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the experiment's truncation cutoff.
    #[arg(long)]
    cutoff: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two JSON reports, treating numbers within a relative
    /// tolerance as equal. Exits 0 when they agree, 1 when they differ.
    Diff {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// List the shipped presets.
    ListPresets,
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(ConfigError(format!("cannot read {}: {e}", path.display())))
    })
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Some(Command::ListPresets) => {
            for (name, _) in presets::PRESETS {
                println!("{name}");
            }
            return Ok(0);
        }
        Some(Command::Diff { a, b, tolerance }) => {
            let parse = |path: &PathBuf| -> Result<serde_json::Value, CliError> {
                serde_json::from_str(&read_file(path)?).map_err(|e| {
                    CliError::Config(ConfigError(format!(
                        "{} is not valid JSON: {e}",
                        path.display()
                    )))
                })
            };
            let lines = report::diff_json(&parse(&a)?, &parse(&b)?, tolerance);
            if lines.is_empty() {
                println!("reports agree within tolerance {tolerance:e}");
                return Ok(0);
            }
            for line in &lines {
                println!("{line}");
            }
            return Ok(1);
        }
        None => {}
    }

    let text = match (&cli.config, &cli.preset) {
        (Some(path), None) => read_file(path)?,
        (None, Some(name)) => presets::find(name)
            .map(str::to_string)
            .ok_or_else(|| {
                CliError::Config(ConfigError(format!(
                    "unknown preset '{name}'; run `bergman list-presets`"
                )))
            })?,
        _ => {
            return Err(CliError::Config(ConfigError(
                "pass exactly one of --config or --preset".into(),
            )))
        }
    };

    let mut config = ExperimentConfig::parse(&text)?;
    config.apply_overrides(cli.seed, cli.cutoff);
    // Overrides can break structural constraints the original file met.
    config.validate()?;

    let document = experiments::run(&config)?;
    let rendered = document.render(cli.format);
    match &cli.out {
        Some(path) => std::fs::write(path, rendered.as_bytes()).map_err(|e| {
            CliError::Config(ConfigError(format!("cannot write {}: {e}", path.display())))
        })?,
        None => print!("{rendered}"),
    }
    Ok(if document.passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(2)
        }
    }
}
