//! Hamiltonians and dissipators for a control qubit coupled to one or two
//! memory qubits.
//!
//! Conventions shared by every module:
//! - basis `|sc⟩ ⊗ |m⟩` (control first), index `b = 2·sc + m` for two qubits
//!   and `b = 4·sc + 2·m1 + m2` for three;
//! - `|1⟩` is the excited state and `σz|1⟩ = +|1⟩`;
//! - frequencies are angular, in rad/ns; times are in ns.
//!
//! The frame co-rotates with the memory qubit by default (`omega_m = 0`), so
//! the control frequency equals the detuning.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{tensor_all, ComplexMatrix};

/// Converts a frequency `f/2π` in MHz to an angular frequency in rad/ns.
pub fn mhz_to_rad_per_ns(f_over_2pi_mhz: f64) -> f64 {
    2.0 * PI * (f_over_2pi_mhz / 1e3)
}

pub fn rad_per_ns_to_mhz(omega: f64) -> f64 {
    omega / (2.0 * PI) * 1e3
}

/// Single-qubit operators in the `(|0⟩, |1⟩)` basis.
pub mod qubit {
    use super::*;

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2).expect("dim 2")
    }

    /// `σz = |1⟩⟨1| − |0⟩⟨0|`
    pub fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::real_diagonal(&[-1.0, 1.0]).expect("dim 2")
    }

    /// `σ+ = |1⟩⟨0|`
    pub fn sigma_plus() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).expect("dim 2")
    }

    /// `σ− = |0⟩⟨1|`
    pub fn sigma_minus() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).expect("dim 2")
    }

    /// `σ+σ− = |1⟩⟨1|`
    pub fn number() -> ComplexMatrix {
        ComplexMatrix::real_diagonal(&[0.0, 1.0]).expect("dim 2")
    }

    pub fn projector_ground() -> ComplexMatrix {
        ComplexMatrix::real_diagonal(&[1.0, 0.0]).expect("dim 2")
    }

    pub fn projector_excited() -> ComplexMatrix {
        number()
    }
}

/// Embeds a single-qubit operator acting on `site` into an `n_qubits` register.
pub fn on_site(op: &ComplexMatrix, site: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    if site >= n_qubits {
        return Err(Error::Validation(format!(
            "site {site} out of range for {n_qubits} qubits"
        )));
    }
    let id = qubit::identity();
    let factors: Vec<&ComplexMatrix> = (0..n_qubits)
        .map(|k| if k == site { op } else { &id })
        .collect();
    tensor_all(&factors)
}

/// Excitation-number operator on `site`.
pub fn site_number(site: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    on_site(&qubit::number(), site, n_qubits)
}

/// Total excitation operator `Σ_k σ+σ−` of the register.
pub fn total_excitation(n_qubits: usize) -> Result<ComplexMatrix> {
    let dim = 1usize << n_qubits;
    let diag: Vec<f64> = (0..dim).map(|b| (b as u32).count_ones() as f64).collect();
    ComplexMatrix::real_diagonal(&diag)
}

/// Physical parameters of the control/memory pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HybridParams {
    /// Coupling `g`, rad/ns.
    pub g: f64,
    /// Detuning `Δ = ω_sc − ω_m`, rad/ns.
    pub delta: f64,
    /// Memory frequency in the chosen frame, rad/ns.
    pub omega_m: f64,
    /// Control dephasing time, ns (`f64::INFINITY` disables it).
    pub t2_sc: f64,
    /// Control relaxation time, ns (`f64::INFINITY` disables it).
    pub t1_sc: f64,
}

impl HybridParams {
    pub fn new(g: f64, delta: f64, t2_sc: f64, t1_sc: f64) -> Result<Self> {
        let p = Self {
            g,
            delta,
            omega_m: 0.0,
            t2_sc,
            t1_sc,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters from `g/2π` and `Δ/2π` in MHz.
    pub fn from_mhz(g_over_2pi: f64, delta_over_2pi: f64, t2_sc: f64, t1_sc: f64) -> Result<Self> {
        Self::new(
            mhz_to_rad_per_ns(g_over_2pi),
            mhz_to_rad_per_ns(delta_over_2pi),
            t2_sc,
            t1_sc,
        )
    }

    pub fn with_omega_m(mut self, omega_m: f64) -> Result<Self> {
        self.omega_m = omega_m;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g >= 0.0 && self.g.is_finite()) {
            return Err(Error::Validation(format!(
                "coupling must be finite and ≥ 0, got {}",
                self.g
            )));
        }
        if !self.delta.is_finite() || !self.omega_m.is_finite() {
            return Err(Error::Validation("frequencies must be finite".into()));
        }
        for (name, t) in [("t2_sc", self.t2_sc), ("t1_sc", self.t1_sc)] {
            if !(t > 0.0) {
                return Err(Error::Validation(format!(
                    "{name} must be > 0 or infinite, got {t}"
                )));
            }
        }
        Ok(())
    }

    pub fn omega_sc(&self) -> f64 {
        self.delta + self.omega_m
    }

    /// Single-excitation Rabi frequency `√(4g² + Δ²)`.
    pub fn rabi_frequency(&self) -> f64 {
        (4.0 * self.g * self.g + self.delta * self.delta).sqrt()
    }
}

/// `(ω_sc/2)σz⊗I + (ω_m/2)I⊗σz + g(σ+⊗σ− + σ−⊗σ+)`
pub fn jc_hamiltonian(p: &HybridParams) -> ComplexMatrix {
    register_hamiltonian(p, 1).expect("two-qubit register")
}

/// Control qubit coupled with equal strength to two memory qubits of equal
/// frequency. Dimension 8.
pub fn three_qubit_hamiltonian(p: &HybridParams) -> ComplexMatrix {
    register_hamiltonian(p, 2).expect("three-qubit register")
}

fn register_hamiltonian(p: &HybridParams, n_memories: usize) -> Result<ComplexMatrix> {
    let n = n_memories + 1;
    let mut h = on_site(&qubit::sigma_z(), 0, n)?.scale_real(p.omega_sc() / 2.0);
    let sp_sc = on_site(&qubit::sigma_plus(), 0, n)?;
    let sm_sc = on_site(&qubit::sigma_minus(), 0, n)?;
    for m in 1..n {
        h = &h + &on_site(&qubit::sigma_z(), m, n)?.scale_real(p.omega_m / 2.0);
        let exchange = &(&sp_sc * &on_site(&qubit::sigma_minus(), m, n)?)
            + &(&sm_sc * &on_site(&qubit::sigma_plus(), m, n)?);
        h = &h + &exchange.scale_real(p.g);
    }
    Ok(h)
}

/// Phase error `g²·t_I/|Δ|` accumulated by a detuned memory under the
/// dispersive `(g²/Δ)σzσz` coupling during an operation of length `t_i`.
pub fn dispersive_phase_error(g: f64, delta: f64, t_i: f64) -> Result<f64> {
    if delta == 0.0 {
        return Err(Error::Divergence(
            "dispersive phase error at zero detuning".into(),
        ));
    }
    Ok(g * g * t_i / delta.abs())
}

/// How a dissipator enters the master equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DissipatorKind {
    /// `−rate·[L, [L, ρ]]`
    DephasingDoubleCommutator,
    /// `rate·(LρL† − ½{L†L, ρ})`
    Jump,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dissipator {
    pub operator: ComplexMatrix,
    pub rate: f64,
    pub kind: DissipatorKind,
}

impl Dissipator {
    /// Characteristic time of the channel, ns: `T2` for dephasing, `T1` for jumps.
    pub fn timescale(&self) -> f64 {
        match self.kind {
            DissipatorKind::DephasingDoubleCommutator => 1.0 / (2.0 * self.rate),
            DissipatorKind::Jump => 1.0 / self.rate,
        }
    }
}

/// Control-qubit dissipators for the two-qubit register.
pub fn dissipators(p: &HybridParams) -> Vec<Dissipator> {
    control_dissipators(p, 2).expect("two-qubit register")
}

/// Control-qubit dephasing `(σz, 1/(2·T2))` and relaxation `(σ−, 1/T1)`,
/// lifted to an `n_qubits` register with the control on site 0.
/// Infinite times contribute nothing.
pub fn control_dissipators(p: &HybridParams, n_qubits: usize) -> Result<Vec<Dissipator>> {
    let mut out = Vec::new();
    if p.t2_sc.is_finite() {
        out.push(Dissipator {
            operator: on_site(&qubit::sigma_z(), 0, n_qubits)?,
            rate: 1.0 / (2.0 * p.t2_sc),
            kind: DissipatorKind::DephasingDoubleCommutator,
        });
    }
    if p.t1_sc.is_finite() {
        out.push(Dissipator {
            operator: on_site(&qubit::sigma_minus(), 0, n_qubits)?,
            rate: 1.0 / p.t1_sc,
            kind: DissipatorKind::Jump,
        });
    }
    Ok(out)
}

/// Hamiltonian plus dissipators of a master equation.
#[derive(Clone, Debug)]
pub struct LindbladModel {
    hamiltonian: ComplexMatrix,
    dissipators: Vec<Dissipator>,
}

impl LindbladModel {
    pub fn new(hamiltonian: ComplexMatrix, dissipators: Vec<Dissipator>) -> Result<Self> {
        let herm = hamiltonian.hermiticity_error();
        if herm > 1e-10 {
            return Err(Error::NotHermitian(herm));
        }
        let dim = hamiltonian.dim();
        if !dim.is_power_of_two() {
            return Err(Error::Validation(format!(
                "dimension {dim} is not a qubit register"
            )));
        }
        for d in &dissipators {
            if d.operator.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d.operator.dim(),
                });
            }
            if !(d.rate >= 0.0 && d.rate.is_finite()) {
                return Err(Error::Validation(format!(
                    "dissipator rate must be ≥ 0, got {}",
                    d.rate
                )));
            }
        }
        Ok(Self {
            hamiltonian,
            dissipators,
        })
    }

    /// Control + memory pair with the control's noise.
    pub fn two_qubit(p: &HybridParams) -> Self {
        Self::new(jc_hamiltonian(p), dissipators(p)).expect("constructed model is valid")
    }

    /// Control + two memories with the control's noise.
    pub fn three_qubit(p: &HybridParams, with_noise: bool) -> Self {
        let diss = if with_noise {
            control_dissipators(p, 3).expect("three-qubit register")
        } else {
            Vec::new()
        };
        Self::new(three_qubit_hamiltonian(p), diss).expect("constructed model is valid")
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn dissipators(&self) -> &[Dissipator] {
        &self.dissipators
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    /// True when every dissipator is a dephasing term.
    pub fn is_dephasing_only(&self) -> bool {
        self.dissipators
            .iter()
            .all(|d| d.kind == DissipatorKind::DephasingDoubleCommutator)
    }
}

/// `|0⟩_sc|1⟩_m`: excitation stored in the memory.
pub const MEMORY_EXCITED: usize = 0b01;
/// `|1⟩_sc|0⟩_m`: excitation on the control.
pub const CONTROL_EXCITED: usize = 0b10;
