//! Config-driven experiment runner: JSON in, CSV plus a one-line summary out.

pub mod config;
pub mod runners;
pub mod table;

use std::path::Path;

pub use config::{Axis, ConfigParams, ExperimentKind, StateName, SweepConfig, TimeNs};
pub use runners::{
    dispersive_table, lifetime_estimate, run_decay_trace, run_dephasing_sweep, run_detuning_sweep,
    run_dfs, run_dispersive, run_wstate, wstate_scan, DecayRun, DephasingPoint, DephasingSweep,
    DetuningPoint, DetuningSweep, DfsRun, DispersiveTable, LifetimePoint, Report, Runner,
    WStateScan,
};
pub use table::{format_sig, Table};

use crate::error::Result;

/// Runs `cfg`, writes its CSV to `output` (or the config's own path) and
/// returns the report.
pub fn run_to_file(cfg: &SweepConfig, output: Option<&Path>) -> Result<Report> {
    let report = Runner::default().run(cfg)?;
    let path = output.map_or_else(|| cfg.output_path(), Path::to_path_buf);
    report.table().write_file(&path)?;
    Ok(report)
}
