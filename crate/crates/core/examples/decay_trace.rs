// Memory population under control dephasing, control relaxation, and both.

use antizeno::analysis::effective_t1;
use antizeno::experiments::{run_decay_trace, ExperimentKind, SweepConfig, TimeNs};

pub struct Variant {
    pub t2_ns: f64,
    pub t1_ns: f64,
    pub tail: f64,
    pub t1_eff: Option<f64>,
}

pub fn run_example(t_max_ns: f64) -> antizeno::Result<Vec<Variant>> {
    let inf = f64::INFINITY;
    [(10.0, 400.0), (10.0, inf), (inf, 400.0)]
        .into_iter()
        .map(|(t2, t1)| {
            let mut cfg = SweepConfig::new(ExperimentKind::DecayTrace);
            cfg.t2_sc_ns = Some(TimeNs(t2));
            cfg.t1_sc_ns = Some(TimeNs(t1));
            cfg.t_max_ns = Some(t_max_ns);
            cfg.sample_dt_ns = Some(t_max_ns / 2000.0);
            let run = run_decay_trace(&cfg)?;
            Ok(Variant {
                t2_ns: t2,
                t1_ns: t1,
                tail: run.trace.tail_mean(0.1),
                t1_eff: effective_t1(&run.trace).ok().map(|e| e.t1_eff),
            })
        })
        .collect()
}

fn main() -> antizeno::Result<()> {
    for v in run_example(40_000.0)? {
        let t1 = v.t1_eff.map_or("-".to_string(), |t| format!("{t:.1} ns"));
        println!(
            "T2 = {:>5} ns, T1 = {:>5} ns: tail {:.4}, t1_eff {t1}",
            v.t2_ns, v.t1_ns, v.tail
        );
    }
    Ok(())
}
