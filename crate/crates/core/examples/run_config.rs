// Runs a JSON experiment config and writes its CSV.
//
// cargo run --release --example run_config -- configs/detuning_sweep.json [out.csv]

use std::path::{Path, PathBuf};

use antizeno::experiments::{run_to_file, Report, SweepConfig};

pub fn run_example(config: &Path, output: Option<&Path>) -> antizeno::Result<Report> {
    let cfg = SweepConfig::load(config)?;
    run_to_file(&cfg, output)
}

fn main() {
    let mut args = std::env::args().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| {
        eprintln!("usage: run_config CONFIG.json [OUTPUT.csv]");
        std::process::exit(2)
    });
    let output = args.next().map(PathBuf::from);
    match run_example(&config, output.as_deref()) {
        Ok(report) => println!("{}", report.summary()),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code())
        }
    }
}
