// Phase error accumulated through the dispersive coupling during one
// operation on the control qubit.

use antizeno::model::{dispersive_phase_error, mhz_to_rad_per_ns};

pub fn run_example(t_i_ns: f64) -> antizeno::Result<Vec<(f64, f64)>> {
    let g = mhz_to_rad_per_ns(25.0);
    [250.0, 500.0, 1000.0, 2000.0, 4000.0]
        .into_iter()
        .map(|d| Ok((d, dispersive_phase_error(g, mhz_to_rad_per_ns(d), t_i_ns)?)))
        .collect()
}

fn main() -> antizeno::Result<()> {
    println!("delta_mhz,epsilon");
    for (d, eps) in run_example(20.0)? {
        println!("{d},{eps:.6}");
    }
    Ok(())
}
