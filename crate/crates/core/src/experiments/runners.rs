//! One runner per experiment. Sweep points run in parallel; results keep
//! sweep order.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::analysis::{analytic_t1, effective_t1, fit_alpha, power_law_exponent, T1Estimate};
use crate::decoupling::{dfs_leakage, w_overlap, MemoryState};
use crate::dynamics::{DecayTrace, Integrator};
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::model::{dispersive_phase_error, HybridParams, LindbladModel, MEMORY_EXCITED};

use super::config::{ExperimentKind, SweepConfig};
use super::table::Table;

/// Default horizon in units of the analytic lifetime estimate.
pub const HORIZON_FACTOR: f64 = 50.0;
/// Largest horizon reached by automatic extension.
pub const MAX_HORIZON_FACTOR: f64 = 100.0;
/// Samples per run when `sample_dt_ns` is not given.
pub const DEFAULT_SAMPLES: f64 = 5000.0;

/// Analytic lifetime used to size the default horizon: the dephasing formula
/// with `α = ½` when the control dephases, otherwise relaxation through the
/// hybridized admixture `g²/(Δ² + 4g²)` of the control.
pub fn lifetime_estimate(p: &HybridParams) -> Option<f64> {
    if let Ok(t) = analytic_t1(p, 0.5) {
        return Some(t);
    }
    if p.g > 0.0 && p.t1_sc.is_finite() {
        let mix = p.g * p.g / (p.delta * p.delta + 4.0 * p.g * p.g);
        return Some(LN_2 * p.t1_sc / mix);
    }
    None
}

/// Lifetime measured on one parameter point.
#[derive(Clone, Debug)]
pub struct LifetimePoint {
    pub params: HybridParams,
    pub estimate: T1Estimate,
    pub trace: DecayTrace,
    pub t_max: f64,
    pub sample_dt: f64,
}

#[derive(Clone, Debug)]
pub struct DetuningPoint {
    pub delta_mhz: f64,
    pub lifetime: LifetimePoint,
    pub t1_analytic: f64,
}

#[derive(Clone, Debug)]
pub struct DetuningSweep {
    pub points: Vec<DetuningPoint>,
    pub alpha: f64,
    pub exponent: f64,
}

#[derive(Clone, Debug)]
pub struct DecayRun {
    pub params: HybridParams,
    pub trace: DecayTrace,
    /// `None` when the trace has not settled inside the horizon.
    pub estimate: Option<T1Estimate>,
}

#[derive(Clone, Debug)]
pub struct DephasingPoint {
    pub t2_ns: f64,
    pub delta_mhz: f64,
    pub lifetime: LifetimePoint,
}

#[derive(Clone, Debug)]
pub struct DephasingSweep {
    /// Grouped by detuning, then ordered by `T2`.
    pub points: Vec<DephasingPoint>,
}

#[derive(Clone, Debug)]
pub struct WStateScan {
    pub n_spins: usize,
    pub thetas: Vec<f64>,
    pub overlaps: Vec<C64>,
    /// ns
    pub orthogonalization_time: f64,
}

#[derive(Clone, Debug)]
pub struct DfsRun {
    pub state: MemoryState,
    pub params: HybridParams,
    pub trace: DecayTrace,
}

#[derive(Clone, Debug)]
pub struct DispersiveTable {
    pub t_i_ns: f64,
    pub rows: Vec<(f64, f64)>,
}

/// Result of any experiment.
#[derive(Clone, Debug)]
pub enum Report {
    DetuningSweep(DetuningSweep),
    DecayTrace(DecayRun),
    DephasingSweep(DephasingSweep),
    Wstate(WStateScan),
    Dfs(DfsRun),
    Dispersive(DispersiveTable),
}

#[derive(Clone, Copy, Debug)]
pub struct Runner {
    pub integrator: Integrator,
    pub parallel: bool,
}

impl Default for Runner {
    fn default() -> Self {
        Self {
            integrator: Integrator::default(),
            parallel: true,
        }
    }
}

impl Runner {
    pub fn run(&self, cfg: &SweepConfig) -> Result<Report> {
        cfg.validate()?;
        Ok(match cfg.experiment {
            ExperimentKind::DetuningSweep => Report::DetuningSweep(self.detuning_sweep(cfg)?),
            ExperimentKind::DecayTrace => Report::DecayTrace(self.decay_trace(cfg)?),
            ExperimentKind::DephasingSweep => Report::DephasingSweep(self.dephasing_sweep(cfg)?),
            ExperimentKind::Wstate => Report::Wstate(wstate_scan(cfg)?),
            ExperimentKind::Dfs => Report::Dfs(self.dfs(cfg)?),
            ExperimentKind::Dispersive => Report::Dispersive(dispersive_table(cfg)?),
        })
    }

    fn map<T, U, F>(&self, items: Vec<T>, f: F) -> Result<Vec<U>>
    where
        T: Send,
        U: Send,
        F: Fn(T) -> Result<U> + Sync + Send,
    {
        if self.parallel {
            items.into_par_iter().map(f).collect()
        } else {
            items.into_iter().map(f).collect()
        }
    }

    /// Two-qubit run from `|0⟩_sc|1⟩_m`.
    pub fn memory_decay(&self, p: &HybridParams, t_max: f64, sample_dt: f64) -> Result<DecayTrace> {
        let rho0 = DensityMatrix::basis_state(4, MEMORY_EXCITED)?;
        self.integrator
            .run(&rho0, &LindbladModel::two_qubit(p), t_max, sample_dt)
    }

    /// Runs until the memory population settles, doubling the horizon as
    /// needed up to [`MAX_HORIZON_FACTOR`] times the analytic estimate.
    pub fn measure_lifetime(
        &self,
        p: &HybridParams,
        t_max: Option<f64>,
        sample_dt: Option<f64>,
    ) -> Result<LifetimePoint> {
        let estimate = lifetime_estimate(p);
        let mut t_max = match (t_max, estimate) {
            (Some(t), _) => t,
            (None, Some(e)) => HORIZON_FACTOR * e,
            (None, None) => {
                return Err(Error::InsufficientHorizon(
                    "no decay expected for these parameters; set t_max_ns to simulate anyway"
                        .into(),
                ))
            }
        };
        let cap = estimate.map_or(t_max, |e| (MAX_HORIZON_FACTOR * e).max(t_max));
        loop {
            let dt = sample_dt.unwrap_or(t_max / DEFAULT_SAMPLES).min(t_max);
            let trace = self.memory_decay(p, t_max, dt)?;
            match effective_t1(&trace) {
                Ok(estimate) => {
                    return Ok(LifetimePoint {
                        params: *p,
                        estimate,
                        trace,
                        t_max,
                        sample_dt: dt,
                    })
                }
                Err(Error::InsufficientHorizon(msg)) if 2.0 * t_max > cap * (1.0 + 1e-12) => {
                    return Err(Error::InsufficientHorizon(format!(
                        "{msg} (horizon {t_max:.6e} ns)"
                    )))
                }
                Err(Error::InsufficientHorizon(_)) => t_max *= 2.0,
                Err(e) => return Err(e),
            }
        }
    }

    pub fn detuning_sweep(&self, cfg: &SweepConfig) -> Result<DetuningSweep> {
        let base = cfg.params()?;
        let axis = cfg.sweep().expect("detuning sweep has an axis");
        let lifetimes = self.map(axis.values.clone(), |d| {
            let p = base.with(&axis.field, d)?.hybrid()?;
            self.measure_lifetime(&p, cfg.t_max_ns, cfg.sample_dt_ns)
        })?;
        let fit: Vec<_> = lifetimes
            .iter()
            .map(|l| (l.params, l.estimate.t1_eff))
            .collect();
        let alpha = fit_alpha(&fit)?;
        let exponent = if axis.values.len() >= 2 {
            let pts: Vec<_> = axis
                .values
                .iter()
                .zip(&lifetimes)
                .map(|(&d, l)| (d, l.estimate.t1_eff))
                .collect();
            power_law_exponent(&pts)?
        } else {
            f64::NAN
        };
        let points = axis
            .values
            .iter()
            .zip(lifetimes)
            .map(|(&delta_mhz, lifetime)| {
                let t1_analytic = analytic_t1(&lifetime.params, alpha)?;
                Ok(DetuningPoint {
                    delta_mhz,
                    lifetime,
                    t1_analytic,
                })
            })
            .collect::<Result<_>>()?;
        Ok(DetuningSweep {
            points,
            alpha,
            exponent,
        })
    }

    pub fn decay_trace(&self, cfg: &SweepConfig) -> Result<DecayRun> {
        let p = cfg.params()?.hybrid()?;
        let t_max = match cfg.t_max_ns {
            Some(t) => t,
            None => {
                HORIZON_FACTOR
                    * lifetime_estimate(&p).ok_or_else(|| {
                        Error::InsufficientHorizon(
                            "no decay expected for these parameters; set t_max_ns".into(),
                        )
                    })?
            }
        };
        let dt = cfg.sample_dt_ns.unwrap_or(t_max / DEFAULT_SAMPLES);
        let trace = self.memory_decay(&p, t_max, dt)?;
        let estimate = effective_t1(&trace).ok();
        Ok(DecayRun {
            params: p,
            trace,
            estimate,
        })
    }

    pub fn dephasing_sweep(&self, cfg: &SweepConfig) -> Result<DephasingSweep> {
        let base = cfg.params()?;
        let sweep = cfg.sweep().expect("dephasing sweep has an axis");
        let grid = cfg.grid().expect("dephasing sweep has a grid");
        let pairs: Vec<(f64, f64)> = grid
            .values
            .iter()
            .flat_map(|&d| sweep.values.iter().map(move |&t2| (d, t2)))
            .collect();
        let points = self.map(pairs, |(delta_mhz, t2_ns)| {
            let p = base
                .with(&grid.field, delta_mhz)?
                .with(&sweep.field, t2_ns)?
                .hybrid()?;
            let lifetime = self.measure_lifetime(&p, cfg.t_max_ns, cfg.sample_dt_ns)?;
            Ok(DephasingPoint {
                t2_ns,
                delta_mhz,
                lifetime,
            })
        })?;
        Ok(DephasingSweep { points })
    }

    pub fn dfs(&self, cfg: &SweepConfig) -> Result<DfsRun> {
        let p = cfg.params()?.hybrid()?;
        let t_max = cfg.t_max_ns.unwrap_or(10_000.0);
        let dt = cfg.sample_dt_ns.unwrap_or(t_max / DEFAULT_SAMPLES);
        let state = cfg.memory_state();
        let trace = dfs_leakage(&p, state, t_max, dt, cfg.with_noise())?;
        Ok(DfsRun {
            state,
            params: p,
            trace,
        })
    }
}

pub fn wstate_scan(cfg: &SweepConfig) -> Result<WStateScan> {
    let field = cfg.gradient_field();
    let orthogonalization_time = field.orthogonalization_time()?;
    let thetas = cfg.sweep().expect("wstate has an axis").values;
    let overlaps = thetas
        .iter()
        .map(|&t| w_overlap(field.n_spins, t))
        .collect::<Result<_>>()?;
    Ok(WStateScan {
        n_spins: field.n_spins,
        thetas,
        overlaps,
        orthogonalization_time,
    })
}

pub fn dispersive_table(cfg: &SweepConfig) -> Result<DispersiveTable> {
    let base = cfg.params()?;
    let axis = cfg.sweep().expect("dispersive has an axis");
    let t_i_ns = cfg.t_i_ns();
    let rows = axis
        .values
        .iter()
        .map(|&d| {
            let p = base.with(&axis.field, d)?.hybrid()?;
            Ok((d, dispersive_phase_error(p.g, p.delta, t_i_ns)?))
        })
        .collect::<Result<_>>()?;
    Ok(DispersiveTable { t_i_ns, rows })
}

pub fn run_detuning_sweep(cfg: &SweepConfig) -> Result<DetuningSweep> {
    Runner::default().detuning_sweep(cfg)
}

pub fn run_decay_trace(cfg: &SweepConfig) -> Result<DecayRun> {
    Runner::default().decay_trace(cfg)
}

pub fn run_dephasing_sweep(cfg: &SweepConfig) -> Result<DephasingSweep> {
    Runner::default().dephasing_sweep(cfg)
}

pub fn run_wstate(cfg: &SweepConfig) -> Result<WStateScan> {
    wstate_scan(cfg)
}

pub fn run_dfs(cfg: &SweepConfig) -> Result<DfsRun> {
    Runner::default().dfs(cfg)
}

pub fn run_dispersive(cfg: &SweepConfig) -> Result<DispersiveTable> {
    dispersive_table(cfg)
}

fn trace_table(trace: &DecayTrace) -> Table {
    let mut t = Table::new(vec!["t_ns", "p_memory", "p_control"]);
    for k in 0..trace.len() {
        t.push(vec![trace.times[k], trace.p_memory[k], trace.p_control[k]]);
    }
    t
}

impl Report {
    pub fn table(&self) -> Table {
        match self {
            Report::DetuningSweep(s) => {
                let mut t =
                    Table::new(vec!["delta_mhz", "t1_eff_numeric_ns", "t1_eff_analytic_ns"]);
                for p in &s.points {
                    t.push(vec![p.delta_mhz, p.lifetime.estimate.t1_eff, p.t1_analytic]);
                }
                t
            }
            Report::DecayTrace(r) => trace_table(&r.trace),
            Report::DephasingSweep(s) => {
                let mut t = Table::new(vec!["t2_ns", "delta_mhz", "t1_eff_ns"]);
                for p in &s.points {
                    t.push(vec![p.t2_ns, p.delta_mhz, p.lifetime.estimate.t1_eff]);
                }
                t
            }
            Report::Wstate(w) => {
                let mut t = Table::new(vec![
                    "theta_rad",
                    "theta_n_over_2pi",
                    "overlap_re",
                    "overlap_im",
                    "overlap_abs",
                ]);
                for (&th, z) in w.thetas.iter().zip(&w.overlaps) {
                    t.push(vec![
                        th,
                        th * w.n_spins as f64 / (2.0 * PI),
                        z.re,
                        z.im,
                        z.norm(),
                    ]);
                }
                t
            }
            Report::Dfs(r) => trace_table(&r.trace),
            Report::Dispersive(d) => {
                let mut t = Table::new(vec!["delta_mhz", "epsilon"]);
                for &(delta, eps) in &d.rows {
                    t.push(vec![delta, eps]);
                }
                t
            }
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Report::DetuningSweep(s) => format!(
                "detuning sweep: {} points, fitted alpha = {:.4}, power-law exponent = {:.4}",
                s.points.len(),
                s.alpha,
                s.exponent
            ),
            Report::DecayTrace(r) => {
                let tail = r.trace.tail_mean(0.1);
                match &r.estimate {
                    Some(e) => format!(
                        "decay trace: {} samples, tail mean {tail:.4}, t1_eff = {:.6e} ns",
                        r.trace.len(),
                        e.t1_eff
                    ),
                    None => format!(
                        "decay trace: {} samples, tail mean {tail:.4}, not settled",
                        r.trace.len()
                    ),
                }
            }
            Report::DephasingSweep(s) => {
                format!("dephasing sweep: {} points", s.points.len())
            }
            Report::Wstate(w) => {
                let worst = w
                    .thetas
                    .iter()
                    .zip(&w.overlaps)
                    .filter(|(th, _)| {
                        let k = *th * w.n_spins as f64 / (2.0 * PI);
                        (k - k.round()).abs() < 1e-9 && !(k.round() as usize).is_multiple_of(w.n_spins)
                    })
                    .map(|(_, z)| z.norm())
                    .fold(0.0, f64::max);
                format!(
                    "wstate: N = {}, orthogonalization time = {:.4} ns, max |overlap| at zeros = {worst:.3e}",
                    w.n_spins, w.orthogonalization_time
                )
            }
            Report::Dfs(r) => {
                let leak = r.trace.p_control.iter().copied().fold(0.0, f64::max);
                let dip = r
                    .trace
                    .p_memory
                    .iter()
                    .map(|p| (1.0 - p).abs())
                    .fold(0.0, f64::max);
                format!(
                    "dfs ({:?}): max control population = {leak:.3e}, max memory loss = {dip:.3e}",
                    r.state
                )
            }
            Report::Dispersive(d) => {
                format!("dispersive: t_I = {} ns, {} rows", d.t_i_ns, d.rows.len())
            }
        }
    }
}
