use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Panmictic,
    Cellular,
    Sotea,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Panmictic, Variant::Cellular, Variant::Sotea];

    /// Cellular and SOTEA populations live on an explicit graph.
    pub fn is_structured(self) -> bool {
        !matches!(self, Variant::Panmictic)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Panmictic => "panmictic",
            Variant::Cellular => "cellular",
            Variant::Sotea => "sotea",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "panmictic" => Ok(Variant::Panmictic),
            "cellular" => Ok(Variant::Cellular),
            "sotea" => Ok(Variant::Sotea),
            _ => Err(Error::InvalidConfig(format!("unknown variant {s:?}"))),
        }
    }
}

/// How competitions compare individuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitnessMode {
    /// Rank of the objective within the neighborhood.
    Epistatic,
    /// The objective value itself.
    Raw,
}

impl FitnessMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FitnessMode::Epistatic => "epistatic",
            FitnessMode::Raw => "raw",
        }
    }
}

impl fmt::Display for FitnessMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FitnessMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "epistatic" => Ok(FitnessMode::Epistatic),
            "raw" => Ok(FitnessMode::Raw),
            _ => Err(Error::InvalidConfig(format!("unknown fitness mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EaConfig {
    pub variant: Variant,
    pub fitness_mode: FitnessMode,
    /// Population size.
    pub m: usize,
    pub generations: u64,
    /// Genome length.
    pub n: usize,
    /// Epistasis degree of the NK landscape.
    pub k_nk: usize,
    /// Per-bit flip probability.
    pub mutation_rate: f64,
    pub p_add: f64,
    pub p_remove: f64,
    pub seed: u64,
    /// Record a metrics row every this many generations.
    pub metric_stride: u64,
    /// Compute path length and components on rows whose generation is a
    /// multiple of this; 0 disables.
    pub network_stride: u64,
    /// Generations at which the degree histogram is captured.
    pub snapshot_generations: Vec<u64>,
    /// Fraction of best individuals used for the elite diversity column.
    pub top_fraction: f64,
}

impl EaConfig {
    /// Defaults: mutation rate `1/n`, `p_add = p_remove = 0.1`, 1000
    /// generations, seed 0, metrics every generation, network statistics
    /// every 10 generations.
    pub fn new(variant: Variant, fitness_mode: FitnessMode, m: usize, n: usize, k_nk: usize) -> Self {
        Self {
            variant,
            fitness_mode,
            m,
            generations: 1000,
            n,
            k_nk,
            mutation_rate: 1.0 / n as f64,
            p_add: 0.1,
            p_remove: 0.1,
            seed: 0,
            metric_stride: 1,
            network_stride: 10,
            snapshot_generations: Vec::new(),
            top_fraction: 0.2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.m < 3 {
            return bad(format!("population size must be at least 3, got {}", self.m));
        }
        if self.n == 0 {
            return bad("genome length must be at least 1".into());
        }
        if self.k_nk >= self.n {
            return bad(format!("k_nk={} must be below n={}", self.k_nk, self.n));
        }
        for (name, p) in [
            ("mutation_rate", self.mutation_rate),
            ("p_add", self.p_add),
            ("p_remove", self.p_remove),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name}={p} is not a probability"));
            }
        }
        if self.metric_stride == 0 {
            return bad("metric_stride must be at least 1".into());
        }
        if !(self.top_fraction > 0.0 && self.top_fraction <= 1.0) {
            return bad(format!("top_fraction={} must lie in (0, 1]", self.top_fraction));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let ok = EaConfig::new(Variant::Sotea, FitnessMode::Epistatic, 100, 30, 14);
        ok.validate().unwrap();
        assert_eq!(ok.mutation_rate, 1.0 / 30.0);

        let mut c = ok.clone();
        c.m = 2;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.p_add = 1.5;
        assert!(c.validate().is_err());
        let mut c = ok.clone();
        c.k_nk = 30;
        assert!(c.validate().is_err());
        let mut c = ok;
        c.top_fraction = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
        }
        assert_eq!("raw".parse::<FitnessMode>().unwrap(), FitnessMode::Raw);
        assert!("truncation".parse::<Variant>().is_err());
    }
}
