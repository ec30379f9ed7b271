//! Experiment spec files.
//!
//! A spec names a base configuration, optional sweep axes, the number of
//! replications and the output settings. Replication `r` of every sweep
//! point runs with the seed derived from `(seed, r)`, so points that differ
//! only in variant or fitness mode are paired on the same landscape and the
//! same initial population.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sotea_core::engine::{EaConfig, FitnessMode, Variant};
use sotea_core::rng::{derive_seed, Stream};

use crate::error::{HarnessError, Result};

pub const DEFAULT_BUDGET: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default = "default_replications")]
    pub replications: usize,
    /// Master seed.
    #[serde(default)]
    pub seed: u64,
    /// Maximum number of runs (sweep points × replications).
    #[serde(default = "default_budget")]
    pub budget: usize,
    pub base: BaseConfig,
    #[serde(default)]
    pub sweep: Sweep,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseConfig {
    pub variant: Variant,
    pub fitness_mode: FitnessMode,
    pub m: usize,
    pub generations: u64,
    pub n: usize,
    pub k_nk: usize,
    /// Defaults to `1/n`.
    #[serde(default)]
    pub mutation_rate: Option<f64>,
    #[serde(default = "default_link_probability")]
    pub p_add: f64,
    #[serde(default = "default_link_probability")]
    pub p_remove: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    #[serde(default)]
    pub variant: Option<Vec<Variant>>,
    #[serde(default)]
    pub fitness_mode: Option<Vec<FitnessMode>>,
    #[serde(default)]
    pub k_nk: Option<Vec<usize>>,
    #[serde(default)]
    pub m: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default = "one")]
    pub metric_stride: u64,
    #[serde(default = "default_network_stride")]
    pub network_stride: u64,
    #[serde(default)]
    pub snapshot_generations: Vec<u64>,
    /// Generation at which `netstats` measures the topology.
    #[serde(default = "default_measure_generation")]
    pub measure_generation: u64,
    #[serde(default = "default_top_fraction")]
    pub top_fraction: f64,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            metric_stride: 1,
            network_stride: default_network_stride(),
            snapshot_generations: Vec::new(),
            measure_generation: default_measure_generation(),
            top_fraction: default_top_fraction(),
        }
    }
}

fn default_replications() -> usize {
    10
}
fn default_budget() -> usize {
    DEFAULT_BUDGET
}
fn default_link_probability() -> f64 {
    0.1
}
fn one() -> u64 {
    1
}
fn default_network_stride() -> u64 {
    10
}
fn default_measure_generation() -> u64 {
    1000
}
fn default_top_fraction() -> f64 {
    0.2
}

/// One combination of the sweep axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub variant: Variant,
    pub fitness_mode: FitnessMode,
    pub k_nk: usize,
    pub m: usize,
}

impl SweepPoint {
    pub fn label(&self) -> String {
        format!("{}-{}-k{}-m{}", self.variant, self.fitness_mode, self.k_nk, self.m)
    }
}

/// A fully resolved run: sweep point, replication index and configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunPlan {
    pub point: SweepPoint,
    pub replication: usize,
    pub config: EaConfig,
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| HarnessError::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| HarnessError::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            _ => Self::from_toml(&text),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::InvalidSpec(msg));
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return bad(format!("name {:?} must be non-empty and use only [A-Za-z0-9_-]", self.name));
        }
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if self.outputs.metric_stride == 0 {
            return bad("outputs.metric_stride must be at least 1".into());
        }
        let axes = &self.sweep;
        for (axis, empty) in [
            ("variant", axes.variant.as_ref().is_some_and(Vec::is_empty)),
            ("fitness_mode", axes.fitness_mode.as_ref().is_some_and(Vec::is_empty)),
            ("k_nk", axes.k_nk.as_ref().is_some_and(Vec::is_empty)),
            ("m", axes.m.as_ref().is_some_and(Vec::is_empty)),
        ] {
            if empty {
                return bad(format!("sweep.{axis} must not be empty"));
            }
        }
        for point in self.points() {
            self.config_for(point, 0)
                .validate()
                .map_err(|e| HarnessError::InvalidSpec(format!("{}: {e}", point.label())))?;
        }
        Ok(())
    }

    /// Cross product of the sweep axes, variant-major.
    pub fn points(&self) -> Vec<SweepPoint> {
        let b = &self.base;
        let variants = self.sweep.variant.clone().unwrap_or_else(|| vec![b.variant]);
        let modes = self.sweep.fitness_mode.clone().unwrap_or_else(|| vec![b.fitness_mode]);
        let ks = self.sweep.k_nk.clone().unwrap_or_else(|| vec![b.k_nk]);
        let ms = self.sweep.m.clone().unwrap_or_else(|| vec![b.m]);
        let mut out = Vec::new();
        for &variant in &variants {
            for &fitness_mode in &modes {
                for &k_nk in &ks {
                    for &m in &ms {
                        out.push(SweepPoint {
                            variant,
                            fitness_mode,
                            k_nk,
                            m,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn replication_seed(&self, replication: usize) -> u64 {
        derive_seed(self.seed, Stream::Replication, replication as u64)
    }

    pub fn config_for(&self, point: SweepPoint, replication: usize) -> EaConfig {
        let b = &self.base;
        let mut c = EaConfig::new(point.variant, point.fitness_mode, point.m, b.n, point.k_nk);
        c.generations = b.generations;
        if let Some(rate) = b.mutation_rate {
            c.mutation_rate = rate;
        }
        c.p_add = b.p_add;
        c.p_remove = b.p_remove;
        c.seed = self.replication_seed(replication);
        c.metric_stride = self.outputs.metric_stride;
        c.network_stride = self.outputs.network_stride;
        c.snapshot_generations = self.outputs.snapshot_generations.clone();
        c.top_fraction = self.outputs.top_fraction;
        c
    }

    /// Same experiment with fewer generations and replications, for smoke
    /// runs. Measurement and snapshot generations are clamped to the new
    /// horizon.
    pub fn scaled_down(&self, generations: u64, replications: usize) -> Self {
        let mut s = self.clone();
        s.base.generations = s.base.generations.min(generations);
        s.replications = s.replications.min(replications);
        let horizon = s.base.generations;
        s.outputs.measure_generation = s.outputs.measure_generation.min(horizon);
        for g in &mut s.outputs.snapshot_generations {
            *g = (*g).min(horizon);
        }
        s.outputs.snapshot_generations.dedup();
        s
    }

    pub fn run_count(&self) -> usize {
        self.points().len() * self.replications
    }

    /// Every run of the experiment, or a budget error.
    pub fn plan(&self) -> Result<Vec<RunPlan>> {
        let runs = self.run_count();
        if runs > self.budget {
            return Err(HarnessError::Budget {
                runs,
                budget: self.budget,
            });
        }
        let mut plans = Vec::with_capacity(runs);
        for point in self.points() {
            for replication in 0..self.replications {
                plans.push(RunPlan {
                    point,
                    replication,
                    config: self.config_for(point, replication),
                });
            }
        }
        Ok(plans)
    }
}
