// Dense complex matrices: tensor products, Jacobi eigendecomposition and
// the unitary propagator of a Hermitian generator.

use antizeno::linalg::{eigh, herm_expm, tensor, unitarity_error};
use antizeno::model::{jc_hamiltonian, qubit, HybridParams};

pub fn run_example() -> antizeno::Result<(Vec<f64>, f64)> {
    let zz = tensor(&qubit::sigma_z(), &qubit::sigma_z())?;
    println!(
        "sigma_z (x) sigma_z diagonal: {:?}",
        (0..4).map(|k| zz[(k, k)].re).collect::<Vec<_>>()
    );

    let p = HybridParams::from_mhz(25.0, 300.0, 10.0, f64::INFINITY)?;
    let h = jc_hamiltonian(&p);
    let eig = eigh(&h)?;
    let u = herm_expm(&h, 100.0)?;
    Ok((eig.values, unitarity_error(&u)))
}

fn main() -> antizeno::Result<()> {
    let (values, err) = run_example()?;
    println!("eigenvalues (rad/ns): {values:?}");
    println!("unitarity error of exp(-iHt) at t = 100 ns: {err:.2e}");
    Ok(())
}
