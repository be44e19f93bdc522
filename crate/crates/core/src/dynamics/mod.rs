//! Time evolution: the measurement-interrupted recursion and the master
//! equation integrator.

pub mod lindblad;
pub mod trotter;

pub use lindblad::{integrate, lindblad_rhs, liouvillian_apply, rk4_step, DecayTrace, Integrator};
pub use trotter::{
    contraction_ratio, nonselective_measurement, trotter_average_step, trotter_closed_form,
    trotter_density_step, trotter_phase_cycled, trotter_step, TrotterState,
};
