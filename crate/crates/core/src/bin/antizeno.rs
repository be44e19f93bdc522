use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use antizeno::experiments::{run_to_file, ExperimentKind, SweepConfig};
use antizeno::Error;

#[derive(Parser)]
#[command(
    name = "antizeno",
    version,
    about = "Memory-qubit relaxation experiments"
)]
struct Cli {
    #[command(subcommand)]
    experiment: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lifetime against detuning, with fitted prefactor and exponent
    DetuningSweep(Flags),
    /// Population trace of one parameter point
    DecayTrace(Flags),
    /// Lifetime over a (T2, detuning) grid
    DephasingSweep(Flags),
    /// Collective-mode overlap under a field gradient
    Wstate(Flags),
    /// Leakage of a dark or bright memory pair
    Dfs(Flags),
    /// Dispersive phase error against detuning
    Dispersive(Flags),
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's output path
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, flags) = match cli.experiment {
        Command::DetuningSweep(f) => (ExperimentKind::DetuningSweep, f),
        Command::DecayTrace(f) => (ExperimentKind::DecayTrace, f),
        Command::DephasingSweep(f) => (ExperimentKind::DephasingSweep, f),
        Command::Wstate(f) => (ExperimentKind::Wstate, f),
        Command::Dfs(f) => (ExperimentKind::Dfs, f),
        Command::Dispersive(f) => (ExperimentKind::Dispersive, f),
    };
    match run(kind, &flags) {
        Ok(summary) => {
            if !flags.quiet {
                println!("{summary}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(kind: ExperimentKind, flags: &Flags) -> antizeno::Result<String> {
    let cfg = match &flags.config {
        Some(path) => SweepConfig::load(path)?,
        None => SweepConfig::new(kind),
    };
    if cfg.experiment != kind {
        return Err(Error::Config(format!(
            "config is for {}, not {kind}",
            cfg.experiment
        )));
    }
    let report = run_to_file(&cfg, flags.output.as_deref())?;
    Ok(report.summary())
}
