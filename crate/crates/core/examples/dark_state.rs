// Two memory qubits sharing one excitation: the antisymmetric state never
// reaches the noisy control, the symmetric one swaps into it.

use std::f64::consts::PI;

use antizeno::decoupling::{dfs_leakage, MemoryState};
use antizeno::model::HybridParams;

pub struct Leakage {
    pub dark_max_control: f64,
    pub bright_swap_population: f64,
}

pub fn run_example(t_max_ns: f64) -> antizeno::Result<Leakage> {
    let noisy = HybridParams::from_mhz(25.0, 1250.0, 10.0, f64::INFINITY)?;
    let dark = dfs_leakage(&noisy, MemoryState::Dark, t_max_ns, t_max_ns / 1000.0, true)?;

    let clean = HybridParams::from_mhz(25.0, 0.0, f64::INFINITY, f64::INFINITY)?;
    let t_swap = PI / (2.0 * 2f64.sqrt() * clean.g);
    let bright = dfs_leakage(&clean, MemoryState::Bright, t_swap, t_swap / 50.0, false)?;

    Ok(Leakage {
        dark_max_control: dark.p_control.iter().copied().fold(0.0, f64::max),
        bright_swap_population: *bright.p_control.last().unwrap(),
    })
}

fn main() -> antizeno::Result<()> {
    let l = run_example(10_000.0)?;
    println!(
        "dark state, 10 us with dephasing: max control population {:.2e}",
        l.dark_max_control
    );
    println!(
        "bright state at the swap time: control population {:.9}",
        l.bright_swap_population
    );
    Ok(())
}
