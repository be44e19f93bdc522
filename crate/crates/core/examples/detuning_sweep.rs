// Effective memory lifetime against detuning, with the fitted prefactor
// and power-law exponent.

use antizeno::experiments::{run_detuning_sweep, Axis, DetuningSweep, ExperimentKind, SweepConfig};

pub fn run_example(deltas_mhz: Vec<f64>) -> antizeno::Result<DetuningSweep> {
    let mut cfg = SweepConfig::new(ExperimentKind::DetuningSweep);
    cfg.sweep = Some(Axis::new("delta_over_2pi_mhz", deltas_mhz));
    run_detuning_sweep(&cfg)
}

fn main() -> antizeno::Result<()> {
    let sweep = run_example((6..=14).map(|k| 100.0 * k as f64).collect())?;
    println!("delta/2pi (MHz)  numeric (ns)  analytic (ns)");
    for p in &sweep.points {
        println!(
            "{:>15} {:>13.1} {:>14.1}",
            p.delta_mhz, p.lifetime.estimate.t1_eff, p.t1_analytic
        );
    }
    println!(
        "alpha = {:.4}, exponent = {:.4}",
        sweep.alpha, sweep.exponent
    );
    Ok(())
}
