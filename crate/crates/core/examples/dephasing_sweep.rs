// Lifetime over a grid of control dephasing times and detunings with
// control relaxation switched on.

use antizeno::experiments::{
    run_dephasing_sweep, Axis, DephasingSweep, ExperimentKind, SweepConfig,
};

pub fn run_example(t2s: Vec<f64>, deltas: Vec<f64>) -> antizeno::Result<DephasingSweep> {
    let mut cfg = SweepConfig::new(ExperimentKind::DephasingSweep);
    cfg.sweep = Some(Axis::new("t2_sc_ns", t2s));
    cfg.grid = Some(Axis::new("delta_over_2pi_mhz", deltas));
    run_dephasing_sweep(&cfg)
}

fn main() -> antizeno::Result<()> {
    let t2s = (2..=8).map(|k| 5.0 * k as f64).collect();
    let sweep = run_example(t2s, vec![600.0, 800.0, 1000.0, 1200.0])?;
    let mut last = f64::NAN;
    for p in &sweep.points {
        if p.delta_mhz != last {
            println!("delta/2pi = {} MHz", p.delta_mhz);
            last = p.delta_mhz;
        }
        println!(
            "  T2 = {:>4} ns  t1_eff = {:>9.1} ns",
            p.t2_ns, p.lifetime.estimate.t1_eff
        );
    }
    Ok(())
}
