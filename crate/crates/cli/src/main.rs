//! `phipsim`: runs simulations from a config file and writes tables,
//! spectra and a manifest to an output directory.

mod commands;
mod config;
mod error;
mod output;

use clap::{Parser, Subcommand};
use config::Config;
use error::CliError;
use output::{Format, Outputs, Provenance};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "phipsim", version, about = "Para-hydrogen NMR spin-dynamics and tomography simulator")]
struct Cli {
    /// TOML or JSON run configuration; built-in defaults when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides every seed in the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Signal vector, synthetic spectrum and enhancement of a PHIP experiment.
    Phip,
    /// One-shot tomography from integrals or a synthesized spectrum.
    Tomography,
    /// Separability bounds, pseudo-pure bound and para fractions.
    Bounds,
    /// Deutsch-Jozsa or Grover on a prepared state.
    Algo,
    /// Full twirl of a state.
    Twirl,
    /// Entanglement measures of a list of states.
    Entmetrics,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Phip => "phip",
            Command::Tomography => "tomography",
            Command::Bounds => "bounds",
            Command::Algo => "algo",
            Command::Twirl => "twirl",
            Command::Entmetrics => "entmetrics",
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.apply_seed(seed);
    }
    let canonical = serde_json::to_vec(&cfg).map_err(|e| CliError::Output(e.to_string()))?;
    let prov = Provenance::new(cli.command.name(), &canonical, cfg.seed());
    let mut out = Outputs::new(&cli.out_dir, cli.format, prov);
    out.json("config", &cfg)?;
    let report = match cli.command {
        Command::Phip => commands::phip(&cfg, &mut out)?,
        Command::Tomography => commands::tomography_cmd(&cfg, &mut out)?,
        Command::Bounds => commands::bounds(&cfg, &mut out)?,
        Command::Algo => commands::algo(&cfg, &mut out)?,
        Command::Twirl => commands::twirl(&cfg, &mut out)?,
        Command::Entmetrics => commands::entmetrics(&cfg, &mut out)?,
    };
    let manifest = out.finish()?;
    print!("{report}");
    println!("wrote {}", manifest.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
