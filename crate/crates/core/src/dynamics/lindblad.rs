//! Fixed-step RK4 integration of the master equation
//!
//! `dρ/dt = −i[H, ρ] − Σ γ_k [L_k, [L_k, ρ]] + Σ γ_j (L_j ρ L_j† − ½{L_j†L_j, ρ})`
//!
//! The generator is linear and time independent, so one classical RK4 step is
//! the fixed matrix `P = Σ_{k≤4} (hL)^k/k!` acting on `vec(ρ)`. The integrator
//! assembles the Liouvillian column by column from [`liouvillian_apply`], forms
//! `P`, and raises it to the number of steps between samples.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, DensityMatrix, ONE, ZERO};
use crate::model::{site_number, DissipatorKind, LindbladModel};

const MIN_STEP_NS: f64 = 1e-6;

/// Right-hand side of the master equation for an arbitrary operator `rho`.
pub fn liouvillian_apply(rho: &ComplexMatrix, m: &LindbladModel) -> Result<ComplexMatrix> {
    let h = m.hamiltonian();
    let mut out = h.commutator(rho)?.scale(C64::new(0.0, -1.0));
    for d in m.dissipators() {
        let l = &d.operator;
        let term = match d.kind {
            DissipatorKind::DephasingDoubleCommutator => {
                l.commutator(&l.commutator(rho)?)?.scale_real(-d.rate)
            }
            DissipatorKind::Jump => {
                let ld = l.adjoint();
                let ldl = &ld * l;
                let sandwich = &(l * rho) * &ld;
                (&sandwich - &ldl.anticommutator(rho)?.scale_real(0.5)).scale_real(d.rate)
            }
        };
        out = &out + &term;
    }
    Ok(out)
}

/// `dρ/dt` for a density matrix.
pub fn lindblad_rhs(rho: &DensityMatrix, m: &LindbladModel) -> Result<ComplexMatrix> {
    liouvillian_apply(rho.matrix(), m)
}

/// One explicit classical RK4 step of length `h`.
pub fn rk4_step(rho: &ComplexMatrix, m: &LindbladModel, h: f64) -> Result<ComplexMatrix> {
    let k1 = liouvillian_apply(rho, m)?;
    let k2 = liouvillian_apply(&(rho + &k1.scale_real(h / 2.0)), m)?;
    let k3 = liouvillian_apply(&(rho + &k2.scale_real(h / 2.0)), m)?;
    let k4 = liouvillian_apply(&(rho + &k3.scale_real(h)), m)?;
    let incr = &(&k1 + &k2.scale_real(2.0)) + &(&k3.scale_real(2.0) + &k4);
    Ok(rho + &incr.scale_real(h / 6.0))
}

/// Dense square matrix over `vec(ρ)` (row-major `ρ_ij ↦ i·d + j`).
#[derive(Clone)]
struct SuperOp {
    n: usize,
    data: Vec<C64>,
}

impl SuperOp {
    fn identity(n: usize) -> Self {
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = ONE;
        }
        Self { n, data }
    }

    fn liouvillian(m: &LindbladModel) -> Result<Self> {
        let d = m.dim();
        let n = d * d;
        let mut data = vec![ZERO; n * n];
        for col in 0..n {
            let mut basis = ComplexMatrix::zeros(d)?;
            basis.as_mut_slice()[col] = ONE;
            let image = liouvillian_apply(&basis, m)?;
            for (row, &v) in image.as_slice().iter().enumerate() {
                data[row * n + col] = v;
            }
        }
        Ok(Self { n, data })
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            let out = &mut data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        Self { n, data }
    }

    fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    fn add_identity(mut self) -> Self {
        for i in 0..self.n {
            self.data[i * self.n + i] += ONE;
        }
        self
    }

    /// `I + hL + (hL)²/2 + (hL)³/6 + (hL)⁴/24`, in Horner form.
    fn rk4_propagator(l: &Self, h: f64) -> Self {
        let hl = l.scaled(h);
        let mut p = hl.scaled(0.25).add_identity();
        for k in [3.0, 2.0, 1.0] {
            p = hl.mul(&p).scaled(1.0 / k).add_identity();
        }
        p
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        let n = self.n;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Sampled populations of a run.
#[derive(Clone, Debug)]
pub struct DecayTrace {
    /// Sample times, ns, strictly increasing from 0.
    pub times: Vec<f64>,
    /// Total memory excitation `Σ_{k≥1} ⟨n_k⟩`.
    pub p_memory: Vec<f64>,
    /// Control excitation `⟨n_0⟩`.
    pub p_control: Vec<f64>,
    /// `⟨N̂⟩` per sample.
    pub excitation: Vec<f64>,
    /// `Tr ρ²` per sample.
    pub purity: Vec<f64>,
    /// `max |Tr ρ − 1|` over the samples.
    pub trace_error: f64,
    /// Smallest eigenvalue of any sampled `ρ`.
    pub min_eigenvalue: f64,
    /// Internal RK4 step, ns.
    pub step: f64,
}

impl DecayTrace {
    /// Trace from bare memory populations, e.g. for analysis of external data.
    pub fn from_samples(times: Vec<f64>, p_memory: Vec<f64>) -> Result<Self> {
        if times.len() != p_memory.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                found: p_memory.len(),
            });
        }
        if times.is_empty() || times[0] != 0.0 {
            return Err(Error::Validation("trace must start at t = 0".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Validation(
                "trace times must be strictly increasing".into(),
            ));
        }
        let n = times.len();
        Ok(Self {
            times,
            p_memory,
            p_control: vec![0.0; n],
            excitation: vec![0.0; n],
            purity: vec![1.0; n],
            trace_error: 0.0,
            min_eigenvalue: 0.0,
            step: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_t |⟨N̂⟩(t) − ⟨N̂⟩(0)|`
    pub fn excitation_drift(&self) -> f64 {
        let n0 = self.excitation.first().copied().unwrap_or(0.0);
        self.excitation
            .iter()
            .map(|n| (n - n0).abs())
            .fold(0.0, f64::max)
    }

    pub fn purity_drift(&self) -> f64 {
        let p0 = self.purity.first().copied().unwrap_or(1.0);
        self.purity
            .iter()
            .map(|p| (p - p0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest pointwise difference of `p_memory` against a trace on the same grid.
    pub fn max_memory_deviation(&self, other: &DecayTrace) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self
            .p_memory
            .iter()
            .zip(&other.p_memory)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn tail_mean(&self, fraction: f64) -> f64 {
        let k = ((self.len() as f64 * fraction).ceil() as usize).clamp(1, self.len());
        self.p_memory[self.len() - k..].iter().sum::<f64>() / k as f64
    }
}

/// Fixed-step RK4 integrator.
///
/// The step is `T_fast / steps_per_fast_time`, where `T_fast` is the smallest
/// of the period of the fastest Hamiltonian frequency, every dissipator
/// timescale, and the sampling interval; it is then shortened so that an
/// integer number of steps fits each sampling interval.
#[derive(Clone, Copy, Debug)]
pub struct Integrator {
    pub steps_per_fast_time: u32,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            steps_per_fast_time: 200,
        }
    }
}

impl Integrator {
    pub fn new(steps_per_fast_time: u32) -> Self {
        Self {
            steps_per_fast_time,
        }
    }

    pub fn fast_time(&self, m: &LindbladModel, sample_dt: f64) -> Result<f64> {
        let eig = eigh(m.hamiltonian())?;
        let spread = eig.values.last().unwrap() - eig.values[0];
        let coherent = if spread > 0.0 {
            2.0 * PI / spread
        } else {
            f64::INFINITY
        };
        Ok(m.dissipators()
            .iter()
            .filter(|d| d.rate > 0.0)
            .map(|d| d.timescale())
            .fold(coherent.min(sample_dt), f64::min))
    }

    /// Internal step and number of steps per sampling interval.
    pub fn step_for(&self, m: &LindbladModel, sample_dt: f64) -> Result<(f64, u64)> {
        let target = self.fast_time(m, sample_dt)? / self.steps_per_fast_time.max(1) as f64;
        if target < MIN_STEP_NS {
            return Err(Error::StepUnderflow(target));
        }
        let substeps = (sample_dt / target).ceil().max(1.0) as u64;
        Ok((sample_dt / substeps as f64, substeps))
    }

    pub fn run(
        &self,
        rho0: &DensityMatrix,
        m: &LindbladModel,
        t_max: f64,
        sample_dt: f64,
    ) -> Result<DecayTrace> {
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::Validation(format!(
                "t_max must be positive and finite, got {t_max}"
            )));
        }
        if !(sample_dt > 0.0 && sample_dt <= t_max) {
            return Err(Error::Validation(format!(
                "sample_dt must lie in (0, t_max], got {sample_dt}"
            )));
        }
        if rho0.dim() != m.dim() {
            return Err(Error::DimensionMismatch {
                expected: m.dim(),
                found: rho0.dim(),
            });
        }
        let (h, substeps) = self.step_for(m, sample_dt)?;
        let propagator = SuperOp::rk4_propagator(&SuperOp::liouvillian(m)?, h).pow(substeps);
        let observer = Observer::new(m)?;

        let n_samples = (t_max / sample_dt + 1e-9).floor() as usize;
        let mut trace = DecayTrace {
            times: Vec::with_capacity(n_samples + 1),
            p_memory: Vec::with_capacity(n_samples + 1),
            p_control: Vec::with_capacity(n_samples + 1),
            excitation: Vec::with_capacity(n_samples + 1),
            purity: Vec::with_capacity(n_samples + 1),
            trace_error: 0.0,
            min_eigenvalue: f64::INFINITY,
            step: h,
        };

        let mut rho = rho0.matrix().clone();
        for k in 0..=n_samples {
            if k > 0 {
                let next = propagator.apply(rho.as_slice());
                rho.as_mut_slice().copy_from_slice(&next);
                rho = rho.hermitian_part();
            }
            trace.times.push(k as f64 * sample_dt);
            observer.record(&rho, &mut trace)?;
        }
        Ok(trace)
    }
}

struct Observer {
    control: ComplexMatrix,
    memory: Vec<ComplexMatrix>,
}

impl Observer {
    fn new(m: &LindbladModel) -> Result<Self> {
        let n = m.n_qubits();
        Ok(Self {
            control: site_number(0, n)?,
            memory: (1..n).map(|s| site_number(s, n)).collect::<Result<_>>()?,
        })
    }

    fn record(&self, rho: &ComplexMatrix, trace: &mut DecayTrace) -> Result<()> {
        let expect = |op: &ComplexMatrix| (op * rho).trace().re;
        let p_control = expect(&self.control);
        let p_memory: f64 = self.memory.iter().map(expect).sum();
        trace.p_control.push(p_control);
        trace.p_memory.push(p_memory);
        trace.excitation.push(p_control + p_memory);
        trace.purity.push((rho * rho).trace().re);
        trace.trace_error = trace.trace_error.max((rho.trace() - ONE).norm());
        trace.min_eigenvalue = trace.min_eigenvalue.min(eigh(rho)?.values[0]);
        Ok(())
    }
}

/// [`Integrator::run`] with the default step rule.
pub fn integrate(
    rho0: &DensityMatrix,
    m: &LindbladModel,
    t_max: f64,
    sample_dt: f64,
) -> Result<DecayTrace> {
    Integrator::default().run(rho0, m, t_max, sample_dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{qubit, Dissipator, HybridParams, MEMORY_EXCITED};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn single_qubit_model(h: ComplexMatrix, diss: Vec<Dissipator>) -> LindbladModel {
        LindbladModel::new(h, diss).unwrap()
    }

    #[test]
    fn stationary_state_has_zero_derivative() {
        let p = HybridParams::from_mhz(25.0, 800.0, f64::INFINITY, f64::INFINITY).unwrap();
        let m = LindbladModel::two_qubit(&p);
        let eig = eigh(m.hamiltonian()).unwrap();
        let weights = [0.1, 0.2, 0.3, 0.4];
        let rho = eig.map(|l| {
            let k = eig.values.iter().position(|&v| v == l).unwrap();
            c(weights[k], 0.0)
        });
        let rho = DensityMatrix::new(rho).unwrap();
        let d = lindblad_rhs(&rho, &m).unwrap();
        assert!(d.frobenius_norm() < 1e-14);
    }

    #[test]
    fn dephasing_coherence_rate() {
        let t2 = 10.0;
        let m = single_qubit_model(
            ComplexMatrix::zeros(2).unwrap(),
            vec![Dissipator {
                operator: qubit::sigma_z(),
                rate: 1.0 / (2.0 * t2),
                kind: DissipatorKind::DephasingDoubleCommutator,
            }],
        );
        let rho = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.3, 0.1)],
            vec![c(0.3, -0.1), c(0.5, 0.0)],
        ])
        .unwrap();
        let d = liouvillian_apply(&rho, &m).unwrap();
        assert!((d[(0, 1)] - rho[(0, 1)] * (-2.0 / t2)).norm() < 1e-15);
        assert_eq!(d[(0, 0)], ZERO);
    }

    #[test]
    fn jump_decay_rate() {
        let t1 = 400.0;
        let m = single_qubit_model(
            ComplexMatrix::zeros(2).unwrap(),
            vec![Dissipator {
                operator: qubit::sigma_minus(),
                rate: 1.0 / t1,
                kind: DissipatorKind::Jump,
            }],
        );
        let rho = DensityMatrix::basis_state(2, 1).unwrap();
        let d = lindblad_rhs(&rho, &m).unwrap();
        assert!((d[(1, 1)].re + 1.0 / t1).abs() < 1e-15);
        assert!((d[(0, 0)].re - 1.0 / t1).abs() < 1e-15);
        assert!(d.trace().norm() < 1e-15);
    }

    #[test]
    fn rhs_is_traceless() {
        let p = HybridParams::from_mhz(25.0, 600.0, 10.0, 400.0).unwrap();
        let m = LindbladModel::two_qubit(&p);
        let rho = ComplexMatrix::from_fn(4, |i, j| {
            c((i + 2 * j) as f64 * 0.1, (i as f64 - j as f64) * 0.05)
        })
        .unwrap()
        .hermitian_part();
        assert!(liouvillian_apply(&rho, &m).unwrap().trace().norm() < 1e-12);
    }

    #[test]
    fn resonant_rabi_oscillation() {
        let p = HybridParams::from_mhz(25.0, 0.0, f64::INFINITY, f64::INFINITY).unwrap();
        let m = LindbladModel::two_qubit(&p);
        let rho0 = DensityMatrix::basis_state(4, MEMORY_EXCITED).unwrap();
        let trace = integrate(&rho0, &m, 200.0, 0.5).unwrap();
        for (t, pm) in trace.times.iter().zip(&trace.p_memory) {
            assert!((pm - (p.g * t).cos().powi(2)).abs() < 1e-6, "t = {t}");
        }
        assert!(trace.purity_drift() < 1e-8);
        assert!(trace.trace_error < 1e-10, "{:e}", trace.trace_error);
    }

    #[test]
    fn dephasing_without_coupling_keeps_populations() {
        let p = HybridParams::from_mhz(0.0, 1000.0, 10.0, f64::INFINITY).unwrap();
        let m = LindbladModel::two_qubit(&p);
        let rho0 = DensityMatrix::basis_state(4, MEMORY_EXCITED).unwrap();
        let trace = integrate(&rho0, &m, 500.0, 5.0).unwrap();
        assert!(trace.p_memory.iter().all(|&x| (x - 1.0).abs() < 1e-12));
        assert!(trace.p_control.iter().all(|&x| x.abs() < 1e-12));
    }

    #[test]
    fn propagator_matches_explicit_rk4() {
        let p = HybridParams::from_mhz(25.0, 600.0, 10.0, 400.0).unwrap();
        let m = LindbladModel::two_qubit(&p);
        let rho0 = DensityMatrix::basis_state(4, MEMORY_EXCITED).unwrap();
        let sample_dt = 2.0;
        let trace = integrate(&rho0, &m, 20.0, sample_dt).unwrap();
        let (h, substeps) = Integrator::default().step_for(&m, sample_dt).unwrap();
        assert_eq!(trace.step, h);

        let mut rho = rho0.matrix().clone();
        for k in 1..trace.len() {
            for _ in 0..substeps {
                rho = rk4_step(&rho, &m, h).unwrap();
            }
            let pm = rho[(1, 1)].re + rho[(3, 3)].re;
            assert!((pm - trace.p_memory[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn step_rule() {
        let p = HybridParams::from_mhz(25.0, 1250.0, 10.0, f64::INFINITY).unwrap();
        let m = LindbladModel::two_qubit(&p);
        let (h, n) = Integrator::default().step_for(&m, 100.0).unwrap();
        let t_fast = 2.0 * PI / p.rabi_frequency();
        assert!(h <= t_fast / 200.0 && h > t_fast / 201.0);
        assert!((h * n as f64 - 100.0).abs() < 1e-9);

        // 1e-9 ns sampling forces a sub-floor step
        let err =
            Integrator::default().run(&DensityMatrix::basis_state(4, 1).unwrap(), &m, 1e-8, 1e-9);
        assert!(matches!(err, Err(Error::StepUnderflow(_))));
    }

    #[test]
    fn input_validation() {
        let p = HybridParams::from_mhz(25.0, 1250.0, 10.0, f64::INFINITY).unwrap();
        let m = LindbladModel::two_qubit(&p);
        let rho = DensityMatrix::basis_state(4, 1).unwrap();
        assert!(integrate(&rho, &m, 0.0, 1.0).is_err());
        assert!(integrate(&rho, &m, 10.0, 0.0).is_err());
        let rho8 = DensityMatrix::basis_state(8, 1).unwrap();
        assert!(integrate(&rho8, &m, 10.0, 1.0).is_err());
    }

    #[test]
    fn from_samples_validation() {
        assert!(DecayTrace::from_samples(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(DecayTrace::from_samples(vec![1.0, 2.0], vec![1.0, 0.5]).is_err());
        assert!(DecayTrace::from_samples(vec![0.0, 2.0, 2.0], vec![1.0, 0.5, 0.2]).is_err());
        assert!(DecayTrace::from_samples(vec![0.0, 2.0], vec![1.0, 0.5]).is_ok());
    }
}
