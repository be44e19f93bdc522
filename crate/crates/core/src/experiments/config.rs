//! JSON experiment configuration.
//!
//! Frequencies are given as `f/2π` in MHz and times in ns; `"inf"` is
//! accepted for the control's `T1`/`T2`. Every key except `experiment` is
//! optional and falls back to the reference defaults of the chosen experiment.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::decoupling::{GradientField, MemoryState};
use crate::error::{Error, Result};
use crate::model::{mhz_to_rad_per_ns, HybridParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    DetuningSweep,
    DecayTrace,
    DephasingSweep,
    Wstate,
    Dfs,
    Dispersive,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::DetuningSweep,
        ExperimentKind::DecayTrace,
        ExperimentKind::DephasingSweep,
        ExperimentKind::Wstate,
        ExperimentKind::Dfs,
        ExperimentKind::Dispersive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::DetuningSweep => "detuning-sweep",
            ExperimentKind::DecayTrace => "decay-trace",
            ExperimentKind::DephasingSweep => "dephasing-sweep",
            ExperimentKind::Wstate => "wstate",
            ExperimentKind::Dfs => "dfs",
            ExperimentKind::Dispersive => "dispersive",
        }
    }

    fn sweep_field(self) -> Option<&'static str> {
        match self {
            ExperimentKind::DetuningSweep | ExperimentKind::Dispersive => Some(DELTA),
            ExperimentKind::DephasingSweep => Some(T2),
            ExperimentKind::Wstate => Some(THETA),
            ExperimentKind::DecayTrace | ExperimentKind::Dfs => None,
        }
    }

    fn grid_field(self) -> Option<&'static str> {
        match self {
            ExperimentKind::DephasingSweep => Some(DELTA),
            _ => None,
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub const DELTA: &str = "delta_over_2pi_mhz";
pub const T2: &str = "t2_sc_ns";
pub const THETA: &str = "theta_rad";

/// A time in ns that may be infinite; serialized as a number or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeNs(pub f64);

impl Serialize for TimeNs {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for TimeNs {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(TimeNs(x)),
            Raw::Str(s) if s == "inf" => Ok(TimeNs(f64::INFINITY)),
            Raw::Str(s) => Err(de::Error::custom(format!(
                "expected a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// One swept parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub field: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(field: &str, values: Vec<f64>) -> Self {
        Self {
            field: field.to_string(),
            values,
        }
    }

    fn validate(&self, expected: &str) -> Result<()> {
        if self.field != expected {
            return Err(Error::Config(format!(
                "cannot sweep {:?} here; expected {expected:?}",
                self.field
            )));
        }
        if self.values.is_empty() {
            return Err(Error::Config(format!(
                "sweep over {} has no values",
                self.field
            )));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(format!(
                "sweep over {} has non-finite values",
                self.field
            )));
        }
        if self.values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config(format!(
                "sweep over {} must be strictly increasing",
                self.field
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateName {
    Dark,
    Bright,
}

impl From<StateName> for MemoryState {
    fn from(s: StateName) -> Self {
        match s {
            StateName::Dark => MemoryState::Dark,
            StateName::Bright => MemoryState::Bright,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_over_2pi_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_over_2pi_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t2_sc_ns: Option<TimeNs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t1_sc_ns: Option<TimeNs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_m_over_2pi_mhz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Axis>,
    /// Second axis, used by the dephasing sweep (one block of rows per value).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Axis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max_ns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_dt_ns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Operation time for the dispersive table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_i_ns: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub with_noise: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_spins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_over_2pi_ghz_per_t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub db_dx_t_per_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble_length_um: Option<f64>,
}

/// Physical parameters in config units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConfigParams {
    pub g_over_2pi_mhz: f64,
    pub delta_over_2pi_mhz: f64,
    pub t2_sc_ns: f64,
    pub t1_sc_ns: f64,
    pub omega_m_over_2pi_mhz: f64,
}

impl ConfigParams {
    pub fn set(&mut self, field: &str, value: f64) -> Result<()> {
        match field {
            "g_over_2pi_mhz" => self.g_over_2pi_mhz = value,
            DELTA => self.delta_over_2pi_mhz = value,
            T2 => self.t2_sc_ns = value,
            "t1_sc_ns" => self.t1_sc_ns = value,
            "omega_m_over_2pi_mhz" => self.omega_m_over_2pi_mhz = value,
            other => return Err(Error::Config(format!("unknown parameter {other:?}"))),
        }
        Ok(())
    }

    pub fn with(mut self, field: &str, value: f64) -> Result<Self> {
        self.set(field, value)?;
        Ok(self)
    }

    /// Internal units: rad/ns and ns.
    pub fn hybrid(&self) -> Result<HybridParams> {
        HybridParams::from_mhz(
            self.g_over_2pi_mhz,
            self.delta_over_2pi_mhz,
            self.t2_sc_ns,
            self.t1_sc_ns,
        )?
        .with_omega_m(mhz_to_rad_per_ns(self.omega_m_over_2pi_mhz))
    }
}

impl SweepConfig {
    /// Config with only the experiment set; everything else defaults.
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            g_over_2pi_mhz: None,
            delta_over_2pi_mhz: None,
            t2_sc_ns: None,
            t1_sc_ns: None,
            omega_m_over_2pi_mhz: None,
            sweep: None,
            grid: None,
            t_max_ns: None,
            sample_dt_ns: None,
            output: None,
            t_i_ns: None,
            state: None,
            with_noise: None,
            n_spins: None,
            mu_over_2pi_ghz_per_t: None,
            db_dx_t_per_m: None,
            ensemble_length_um: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let kind = self.experiment;
        match (&self.sweep, kind.sweep_field()) {
            (Some(axis), Some(field)) => axis.validate(field)?,
            (Some(axis), None) => {
                return Err(Error::Config(format!(
                    "{kind} does not take a sweep (got {:?})",
                    axis.field
                )))
            }
            _ => {}
        }
        match (&self.grid, kind.grid_field()) {
            (Some(axis), Some(field)) => axis.validate(field)?,
            (Some(_), None) => return Err(Error::Config(format!("{kind} does not take a grid"))),
            _ => {}
        }
        for (name, v) in [
            ("t_max_ns", self.t_max_ns),
            ("sample_dt_ns", self.sample_dt_ns),
            ("t_i_ns", self.t_i_ns),
        ] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) && !(name == "t_i_ns" && v == 0.0) {
                    return Err(Error::Config(format!("{name} must be positive, got {v}")));
                }
            }
        }
        if let (Some(t), Some(dt)) = (self.t_max_ns, self.sample_dt_ns) {
            if dt > t {
                return Err(Error::Config("sample_dt_ns exceeds t_max_ns".into()));
            }
        }
        self.params()?
            .hybrid()
            .map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    /// Physical parameters with defaults filled in.
    pub fn params(&self) -> Result<ConfigParams> {
        use ExperimentKind::*;
        let (t2, t1) = match self.experiment {
            DephasingSweep => (10.0, 400.0),
            _ => (10.0, f64::INFINITY),
        };
        let delta = match self.experiment {
            DephasingSweep => 600.0,
            DetuningSweep => 600.0,
            _ => 1250.0,
        };
        let mut p = ConfigParams {
            g_over_2pi_mhz: self.g_over_2pi_mhz.unwrap_or(25.0),
            delta_over_2pi_mhz: self.delta_over_2pi_mhz.unwrap_or(delta),
            t2_sc_ns: self.t2_sc_ns.map_or(t2, |t| t.0),
            t1_sc_ns: self.t1_sc_ns.map_or(t1, |t| t.0),
            omega_m_over_2pi_mhz: self.omega_m_over_2pi_mhz.unwrap_or(0.0),
        };
        // the first swept value stands in for the base value
        if let Some(axis) = self.sweep() {
            if axis.field != THETA {
                p.set(&axis.field, axis.values[0])?;
            }
        }
        if let Some(axis) = self.grid() {
            p.set(&axis.field, axis.values[0])?;
        }
        Ok(p)
    }

    /// Sweep axis with defaults for experiments that have one.
    pub fn sweep(&self) -> Option<Axis> {
        if let Some(a) = &self.sweep {
            return Some(a.clone());
        }
        use ExperimentKind::*;
        match self.experiment {
            DetuningSweep => Some(Axis::new(
                DELTA,
                (6..=14).map(|k| k as f64 * 100.0).collect(),
            )),
            DephasingSweep => Some(Axis::new(T2, (2..=8).map(|k| k as f64 * 5.0).collect())),
            Dispersive => Some(Axis::new(DELTA, vec![250.0, 500.0, 1000.0, 2000.0, 4000.0])),
            Wstate => {
                let step = 2.0 * std::f64::consts::PI / self.n_spins() as f64 / 8.0;
                Some(Axis::new(
                    THETA,
                    (0..=24).map(|k| k as f64 * step).collect(),
                ))
            }
            DecayTrace | Dfs => None,
        }
    }

    pub fn grid(&self) -> Option<Axis> {
        if let Some(a) = &self.grid {
            return Some(a.clone());
        }
        match self.experiment {
            ExperimentKind::DephasingSweep => {
                Some(Axis::new(DELTA, vec![600.0, 800.0, 1000.0, 1200.0]))
            }
            _ => None,
        }
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins.unwrap_or(100)
    }

    pub fn gradient_field(&self) -> GradientField {
        GradientField {
            n_spins: self.n_spins(),
            mu_over_2pi_ghz_per_tesla: self.mu_over_2pi_ghz_per_t.unwrap_or(28.0),
            db_dx: self.db_dx_t_per_m.unwrap_or(10.0),
            ensemble_length: self.ensemble_length_um.unwrap_or(20.0) * 1e-6,
        }
    }

    pub fn t_i_ns(&self) -> f64 {
        self.t_i_ns.unwrap_or(20.0)
    }

    pub fn memory_state(&self) -> MemoryState {
        self.state.unwrap_or(StateName::Dark).into()
    }

    pub fn with_noise(&self) -> bool {
        self.with_noise.unwrap_or(true)
    }

    pub fn output_path(&self) -> PathBuf {
        self.output
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{}.csv", self.experiment)))
    }
}
