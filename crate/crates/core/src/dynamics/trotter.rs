//! Alternating unitary evolution and non-selective measurement of the
//! control qubit, restricted to the single-excitation subspace.
//!
//! Between measurements the pair evolves coherently for `τ`; the measurement
//! then removes every coherence between control-qubit states. Inside the
//! subspace `{|10⟩, |01⟩}` the state after each measurement is diagonal and is
//! fully described by the two populations.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{herm_expm, tensor, ComplexMatrix, DensityMatrix};
use crate::model::{jc_hamiltonian, qubit, HybridParams, CONTROL_EXCITED, MEMORY_EXCITED};

/// Populations after `step_index` measurement rounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrotterState {
    /// Population of `|1⟩_sc|0⟩_m`.
    pub p_a: f64,
    /// Population of `|0⟩_sc|1⟩_m`.
    pub p_b: f64,
    pub step_index: u64,
}

impl TrotterState {
    /// Excitation stored in the memory.
    pub fn initial() -> Self {
        Self {
            p_a: 0.0,
            p_b: 1.0,
            step_index: 0,
        }
    }

    pub fn new(p_a: f64, p_b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_a)
            || !(0.0..=1.0).contains(&p_b)
            || (p_a + p_b - 1.0).abs() > 1e-12
        {
            return Err(Error::Validation(format!(
                "populations ({p_a}, {p_b}) do not form a distribution"
            )));
        }
        Ok(Self {
            p_a,
            p_b,
            step_index: 0,
        })
    }

    fn advanced(&self, p_a: f64, p_b: f64) -> Self {
        Self {
            p_a,
            p_b,
            step_index: self.step_index + 1,
        }
    }
}

/// `Δ²/(4g² + Δ²)`: contraction of the population difference per averaged step.
pub fn contraction_ratio(p: &HybridParams) -> f64 {
    if p.g == 0.0 {
        return 1.0;
    }
    let d2 = p.delta * p.delta;
    d2 / (4.0 * p.g * p.g + d2)
}

/// One round of coherent evolution for `tau` followed by measurement.
pub fn trotter_step(s: &TrotterState, p: &HybridParams, tau: f64) -> Result<TrotterState> {
    if !(tau > 0.0) {
        return Err(Error::Validation(format!(
            "tau must be positive, got {tau}"
        )));
    }
    if p.g == 0.0 {
        return Ok(s.advanced(s.p_a, s.p_b));
    }
    let g2 = p.g * p.g;
    let d2 = p.delta * p.delta;
    let omega2 = 4.0 * g2 + d2;
    let osc = 2.0 * g2 * (s.p_a - s.p_b) * (tau * omega2.sqrt()).cos();
    let p_a = (2.0 * g2 + d2 * s.p_a + osc) / omega2;
    let p_b = (2.0 * g2 + d2 * s.p_b - osc) / omega2;
    Ok(s.advanced(p_a, p_b))
}

/// One step of the recursion with the fast `cos(τ√(4g²+Δ²))` term averaged
/// to zero: `p_b ← ½(1 + r(2p_b − 1))`.
pub fn trotter_average_step(s: &TrotterState, p: &HybridParams) -> TrotterState {
    let r = contraction_ratio(p);
    let p_b = 0.5 * (1.0 + r * (s.p_b - s.p_a));
    let p_a = 0.5 * (1.0 - r * (s.p_b - s.p_a));
    s.advanced(p_a, p_b)
}

/// `p_b(n) = ½(1 + rⁿ)` starting from the memory-excited state.
pub fn trotter_closed_form(n: u64, p: &HybridParams) -> TrotterState {
    let rn = if n == 0 {
        1.0
    } else {
        contraction_ratio(p).powf(n as f64)
    };
    TrotterState {
        p_a: 0.5 * (1.0 - rn),
        p_b: 0.5 * (1.0 + rn),
        step_index: n,
    }
}

/// Iterates [`trotter_step`] `n` times while cycling the interval length through
/// `phases` equally spaced offsets spanning one oscillation period
/// `2π/√(4g²+Δ²)`, so the oscillating term averages out over each cycle.
pub fn trotter_phase_cycled(
    p: &HybridParams,
    n: u64,
    base_tau: f64,
    phases: u64,
) -> Result<TrotterState> {
    if phases == 0 {
        return Err(Error::Validation("phases must be ≥ 1".into()));
    }
    let period = 2.0 * PI / p.rabi_frequency();
    let mut s = TrotterState::initial();
    for k in 0..n {
        let tau = base_tau + period * (k % phases) as f64 / phases as f64;
        s = trotter_step(&s, p, tau)?;
    }
    Ok(s)
}

/// `P₀ρP₀ + P₁ρP₁` with `P_k = |k⟩⟨k|_sc ⊗ 1_m`.
pub fn nonselective_measurement(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let p0 = tensor(&qubit::projector_ground(), &qubit::identity())?;
    let p1 = tensor(&qubit::projector_excited(), &qubit::identity())?;
    let a = p0.matmul(rho)?.matmul(&p0)?;
    let b = p1.matmul(rho)?.matmul(&p1)?;
    Ok(&a + &b)
}

/// Density-matrix form of one round: `Ê(e^{−iHτ} ρ e^{iHτ})`.
pub fn trotter_density_step(
    rho: &DensityMatrix,
    p: &HybridParams,
    tau: f64,
) -> Result<DensityMatrix> {
    let u = herm_expm(&jc_hamiltonian(p), tau)?;
    let evolved = u.matmul(rho.matrix())?.matmul(&u.adjoint())?;
    Ok(DensityMatrix::from_matrix_unchecked(
        nonselective_measurement(&evolved)?,
    ))
}

/// Reads `(p_a, p_b)` off a two-qubit density matrix.
pub fn populations(rho: &DensityMatrix) -> (f64, f64) {
    (
        rho.population(CONTROL_EXCITED),
        rho.population(MEMORY_EXCITED),
    )
}
