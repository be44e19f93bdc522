//! Protecting the stored excitation without relying on detuning.
//!
//! Two schemes are covered. A spin-ensemble memory holds the excitation in
//! the collective mode `|W⟩`; a field gradient applied for a time `τ` winds a
//! phase `θ·l` onto spin `l`, and once `θN = 2π` the wound state has no overlap
//! with `|W⟩`, so the control qubit no longer couples to it. With two memory
//! qubits, the antisymmetric single-excitation state is dark: the control's
//! exchange coupling has zero matrix element to it.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::dynamics::{DecayTrace, Integrator};
use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, Ket, ZERO};
use crate::model::{HybridParams, LindbladModel};

/// `⟨W|W_θ⟩ = (1/N) Σ_{l=1..N} e^{iθl}`
pub fn w_overlap(n_spins: usize, theta: f64) -> Result<C64> {
    if n_spins == 0 {
        return Err(Error::Validation("ensemble needs at least one spin".into()));
    }
    let theta = theta.rem_euclid(2.0 * PI);
    let sum: C64 = (1..=n_spins)
        .map(|l| C64::from_polar(1.0, theta * l as f64))
        .sum();
    Ok(sum / n_spins as f64)
}

/// Spin ensemble under a linear field gradient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientField {
    pub n_spins: usize,
    /// Zeeman shift per tesla, `μ/2π`, GHz/T.
    pub mu_over_2pi_ghz_per_tesla: f64,
    /// `dB/dx`, T/m.
    pub db_dx: f64,
    /// `N·Δx`, m.
    pub ensemble_length: f64,
}

impl GradientField {
    pub fn validate(&self) -> Result<()> {
        if self.n_spins < 2 {
            return Err(Error::Validation(
                "ensemble needs at least two spins".into(),
            ));
        }
        if self.db_dx == 0.0 {
            return Err(Error::Divergence(
                "zero field gradient never dephases the ensemble".into(),
            ));
        }
        for (name, v) in [
            ("mu_over_2pi", self.mu_over_2pi_ghz_per_tesla),
            ("db_dx", self.db_dx),
            ("ensemble_length", self.ensemble_length),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Validation(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Spacing `Δx` between neighbouring spins, m.
    pub fn spacing(&self) -> f64 {
        self.ensemble_length / self.n_spins as f64
    }

    /// Phase step `θ = τ·μ·(dB/dx)·Δx` after a pulse of `tau_ns`.
    pub fn phase_per_spin(&self, tau_ns: f64) -> f64 {
        let mu_rad_per_s = 2.0 * PI * self.mu_over_2pi_ghz_per_tesla * 1e9;
        tau_ns * 1e-9 * mu_rad_per_s * self.db_dx * self.spacing()
    }

    /// Pulse length giving `θN = 2π`, ns.
    pub fn orthogonalization_time(&self) -> Result<f64> {
        self.validate()?;
        orthogonalization_time(
            self.mu_over_2pi_ghz_per_tesla,
            self.db_dx,
            self.ensemble_length,
        )
    }
}

/// A gradient pulse of fixed length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GradientPulseParams {
    pub field: GradientField,
    /// ns
    pub tau: f64,
}

impl GradientPulseParams {
    pub fn theta(&self) -> f64 {
        self.field.phase_per_spin(self.tau)
    }

    /// Remaining overlap with the undisturbed collective mode.
    pub fn overlap(&self) -> Result<C64> {
        self.field.validate()?;
        w_overlap(self.field.n_spins, self.theta())
    }
}

/// `τ = 1/((μ/2π)·(dB/dx)·L)`, ns, with `μ/2π` in GHz/T, gradient in T/m and
/// ensemble length in m.
pub fn orthogonalization_time(
    mu_over_2pi_ghz_per_tesla: f64,
    db_dx: f64,
    ensemble_length: f64,
) -> Result<f64> {
    if db_dx == 0.0 {
        return Err(Error::Divergence("zero field gradient".into()));
    }
    if !(mu_over_2pi_ghz_per_tesla > 0.0 && db_dx > 0.0 && ensemble_length > 0.0) {
        return Err(Error::Validation(
            "gradient parameters must be positive".into(),
        ));
    }
    let rate_hz = mu_over_2pi_ghz_per_tesla * 1e9 * db_dx * ensemble_length;
    Ok(1e9 / rate_hz)
}

/// Single-excitation states of the two memory qubits, control in `|0⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemoryState {
    /// `(|01⟩ − |10⟩)/√2`
    Dark,
    /// `(|01⟩ + |10⟩)/√2`
    Bright,
}

impl MemoryState {
    /// Three-qubit ket with the control in its ground state.
    pub fn ket(self) -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sign = match self {
            MemoryState::Dark => -1.0,
            MemoryState::Bright => 1.0,
        };
        let mut amps = vec![ZERO; 8];
        amps[0b001] = C64::new(s, 0.0);
        amps[0b010] = C64::new(sign * s, 0.0);
        Ket::new(amps).expect("dimension 8")
    }
}

/// Evolves an arbitrary three-qubit state under the control + two-memory
/// Hamiltonian, optionally with the control's dephasing and relaxation.
pub fn evolve_memory_pair(
    p: &HybridParams,
    state: &Ket,
    t_max: f64,
    sample_dt: f64,
    with_noise: bool,
) -> Result<DecayTrace> {
    let model = LindbladModel::three_qubit(p, with_noise);
    let rho0 = DensityMatrix::pure(state)?;
    Integrator::default().run(&rho0, &model, t_max, sample_dt)
}

/// Leakage of a dark or bright memory state into the control qubit.
/// `p_control` of the returned trace is the leaked population.
pub fn dfs_leakage(
    p: &HybridParams,
    state: MemoryState,
    t_max: f64,
    sample_dt: f64,
    with_noise: bool,
) -> Result<DecayTrace> {
    evolve_memory_pair(p, &state.ket(), t_max, sample_dt, with_noise)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::herm_expm;
    use crate::model::three_qubit_hamiltonian;

    #[test]
    fn overlap_examples() {
        for n in [1, 2, 7, 100] {
            assert!((w_overlap(n, 0.0).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
        }
        assert!(w_overlap(4, PI / 2.0).unwrap().norm() < 1e-15);
        assert!(w_overlap(100, 2.0 * PI / 100.0).unwrap().norm() <= 1e-12);
        assert!(w_overlap(0, 1.0).is_err());
    }

    #[test]
    fn overlap_is_bounded() {
        for n in [2, 5, 33] {
            for k in 0..50 {
                assert!(w_overlap(n, 0.37 * k as f64).unwrap().norm() <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn orthogonalization_reference() {
        let tau = orthogonalization_time(28.0, 10.0, 20e-6).unwrap();
        assert!((tau - 1e9 / (28e9 * 10.0 * 20e-6)).abs() < 1e-9);
        assert!((tau - 178.6).abs() < 0.05);
        let slow = orthogonalization_time(28.0, 1.0, 20e-6).unwrap();
        assert!((slow - 1786.0).abs() < 0.5);
        assert_eq!(
            orthogonalization_time(28.0, 20.0, 20e-6).unwrap(),
            tau / 2.0
        );
        assert!(matches!(
            orthogonalization_time(28.0, 0.0, 20e-6),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn pulse_of_orthogonalization_length_winds_full_turn() {
        let field = GradientField {
            n_spins: 100,
            mu_over_2pi_ghz_per_tesla: 28.0,
            db_dx: 10.0,
            ensemble_length: 20e-6,
        };
        let tau = field.orthogonalization_time().unwrap();
        let pulse = GradientPulseParams { field, tau };
        assert!((pulse.theta() * 100.0 - 2.0 * PI).abs() < 1e-12);
        assert!(pulse.overlap().unwrap().norm() < 1e-12);
        let closure = tau * 1e-9 * 28e9 * 10.0 * 20e-6;
        assert!((closure - 1.0).abs() < 1e-12);
    }

    #[test]
    fn field_validation() {
        let mut f = GradientField {
            n_spins: 1,
            mu_over_2pi_ghz_per_tesla: 28.0,
            db_dx: 10.0,
            ensemble_length: 1e-5,
        };
        assert!(f.validate().is_err());
        f.n_spins = 10;
        assert!(f.validate().is_ok());
        f.ensemble_length = -1.0;
        assert!(f.orthogonalization_time().is_err());
    }

    #[test]
    fn dark_state_is_stationary_exactly() {
        let p = HybridParams::from_mhz(25.0, 300.0, 10.0, f64::INFINITY).unwrap();
        let u = herm_expm(&three_qubit_hamiltonian(&p), 1234.5).unwrap();
        let dark = MemoryState::Dark.ket();
        let evolved = u.apply(&dark).unwrap();
        let leaked: f64 = (4..8).map(|b| evolved.amplitudes()[b].norm_sqr()).sum();
        assert!(leaked < 1e-24);
    }

    #[test]
    fn bright_state_resonant_transfer_short_run() {
        let p = HybridParams::from_mhz(25.0, 0.0, f64::INFINITY, f64::INFINITY).unwrap();
        let t_swap = PI / (2.0 * 2f64.sqrt() * p.g);
        let tr = dfs_leakage(&p, MemoryState::Bright, t_swap, t_swap / 100.0, false).unwrap();
        assert!((tr.p_control.last().unwrap() - 1.0).abs() < 1e-8);
        assert!(tr.p_memory.last().unwrap().abs() < 1e-8);
    }
}
