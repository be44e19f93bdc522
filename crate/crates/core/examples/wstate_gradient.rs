// Overlap of a phase-wound collective excitation with the W state, and the
// gradient pulse needed to make them orthogonal.

use std::f64::consts::PI;

use antizeno::decoupling::{w_overlap, GradientField, GradientPulseParams};

pub fn run_example(n_spins: usize) -> antizeno::Result<(f64, Vec<(f64, f64)>)> {
    let field = GradientField {
        n_spins,
        mu_over_2pi_ghz_per_tesla: 28.0,
        db_dx: 10.0,
        ensemble_length: 20e-6,
    };
    let tau = field.orthogonalization_time()?;
    let residual = GradientPulseParams { field, tau }.overlap()?.norm();
    let curve = (0..=40)
        .map(|k| {
            let theta = k as f64 * PI / (10.0 * n_spins as f64);
            Ok((theta, w_overlap(n_spins, theta)?.norm()))
        })
        .collect::<antizeno::Result<_>>()?;
    println!("pulse {tau:.2} ns leaves |overlap| = {residual:.1e}");
    Ok((tau, curve))
}

fn main() -> antizeno::Result<()> {
    let (_, curve) = run_example(100)?;
    for (theta, abs) in curve {
        println!("{theta:.6},{abs:.9}");
    }
    Ok(())
}
