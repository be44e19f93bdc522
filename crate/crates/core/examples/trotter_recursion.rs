// Repeated coherent evolution and non-selective measurement of the control
// qubit, compared with the averaged closed form.

use antizeno::dynamics::{
    trotter_average_step, trotter_closed_form, trotter_phase_cycled, TrotterState,
};
use antizeno::model::HybridParams;

pub struct Row {
    pub n: u64,
    pub closed_form: f64,
    pub averaged: f64,
    pub cycled: f64,
}

pub fn run_example() -> antizeno::Result<Vec<Row>> {
    let p = HybridParams::from_mhz(25.0, 1250.0, 10.0, f64::INFINITY)?;
    let tau = 5.0;
    let mut s = TrotterState::initial();
    let mut rows = Vec::new();
    for n in 0..=1000u64 {
        if n % 100 == 0 {
            rows.push(Row {
                n,
                closed_form: trotter_closed_form(n, &p).p_b,
                averaged: s.p_b,
                cycled: trotter_phase_cycled(&p, n, tau, 16)?.p_b,
            });
        }
        s = trotter_average_step(&s, &p);
    }
    Ok(rows)
}

fn main() -> antizeno::Result<()> {
    println!("n,closed_form,averaged,phase_cycled");
    for r in run_example()? {
        println!(
            "{},{:.9},{:.9},{:.9}",
            r.n, r.closed_form, r.averaged, r.cycled
        );
    }
    Ok(())
}
