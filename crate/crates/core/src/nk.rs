//! NK fitness landscapes with random (non-adjacent) epistatic wiring.
//!
//! Each bit `i` contributes `tables[i][pattern]`, where `pattern` packs the
//! bit itself followed by its `k` partners in wiring order, the bit itself
//! being the most significant:
//!
//! ```text
//! pattern = x_i << k | z_1 << (k-1) | ... | z_k
//! ```
//!
//! The objective is the mean contribution and lies in `[0, 1]`.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::rng::{self, Stream};

/// Upper bound on `n * 2^(k+1)` accepted by [`NkLandscape::generate`].
pub const DEFAULT_MAX_TABLE_ENTRIES: u64 = 1 << 30;

/// Version tag written into serialized landscapes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NkLandscape {
    n: usize,
    k: usize,
    seed: Option<u64>,
    wiring: Vec<Vec<usize>>,
    tables: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct LandscapeFile {
    version: u32,
    #[serde(flatten)]
    landscape: NkLandscape,
}

impl NkLandscape {
    /// Generate a landscape from `(n, k, seed)` with the default memory guard.
    ///
    /// All randomness comes from the landscape sub-stream of `seed`, consumed
    /// in a fixed order: the wiring of bits `0..n`, then the tables of bits
    /// `0..n`.
    pub fn generate(n: usize, k: usize, seed: u64) -> Result<Self> {
        Self::generate_with_limit(n, k, seed, DEFAULT_MAX_TABLE_ENTRIES)
    }

    pub fn generate_with_limit(n: usize, k: usize, seed: u64, max_entries: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLandscape("n must be at least 1".into()));
        }
        if k >= n {
            return Err(Error::EpistasisTooLarge { n, k });
        }
        let entries = table_entries(n, k);
        if entries > max_entries as u128 {
            return Err(Error::LandscapeTooLarge {
                entries,
                limit: max_entries,
            });
        }

        let mut rng = rng::stream(seed, Stream::Landscape, 0);
        let mut wiring = Vec::with_capacity(n);
        let mut candidates: Vec<usize> = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n {
            candidates.clear();
            candidates.extend((0..n).filter(|&j| j != i));
            // partial Fisher-Yates: the first k slots are a uniform sample
            for slot in 0..k {
                let pick = rng.gen_range(slot..candidates.len());
                candidates.swap(slot, pick);
            }
            wiring.push(candidates[..k].to_vec());
        }

        let size = 1usize << (k + 1);
        let tables = (0..n)
            .map(|_| (0..size).map(|_| rng.gen::<f64>()).collect())
            .collect();

        Ok(Self {
            n,
            k,
            seed: Some(seed),
            wiring,
            tables,
        })
    }

    /// Build a landscape from explicit wiring and tables, bypassing the RNG.
    pub fn from_parts(wiring: Vec<Vec<usize>>, tables: Vec<Vec<f64>>) -> Result<Self> {
        let n = wiring.len();
        if n == 0 {
            return Err(Error::InvalidLandscape("n must be at least 1".into()));
        }
        let k = wiring[0].len();
        let landscape = Self {
            n,
            k,
            seed: None,
            wiring,
            tables,
        };
        landscape.validate()?;
        Ok(landscape)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidLandscape(msg));
        if self.k >= self.n {
            return Err(Error::EpistasisTooLarge {
                n: self.n,
                k: self.k,
            });
        }
        if self.wiring.len() != self.n || self.tables.len() != self.n {
            return bad(format!(
                "expected {} wiring lists and tables, got {} and {}",
                self.n,
                self.wiring.len(),
                self.tables.len()
            ));
        }
        let size = 1usize << (self.k + 1);
        for (i, (partners, table)) in self.wiring.iter().zip(&self.tables).enumerate() {
            if partners.len() != self.k {
                return bad(format!("bit {i} has {} partners, expected {}", partners.len(), self.k));
            }
            for (a, &p) in partners.iter().enumerate() {
                if p >= self.n || p == i || partners[..a].contains(&p) {
                    return bad(format!("bit {i} has invalid partner {p}"));
                }
            }
            if table.len() != size {
                return bad(format!("table {i} has {} entries, expected {size}", table.len()));
            }
            if let Some(v) = table.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return bad(format!("table {i} holds {v}, outside [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Seed the instance was generated from; `None` for injected instances.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn wiring(&self) -> &[Vec<usize>] {
        &self.wiring
    }

    pub fn tables(&self) -> &[Vec<f64>] {
        &self.tables
    }

    pub fn total_entries(&self) -> usize {
        self.tables.iter().map(Vec::len).sum()
    }

    /// Table index of bit `i` under `genome`.
    #[inline]
    fn pattern(&self, i: usize, genome: &Genome) -> usize {
        let mut idx = genome.get(i) as usize;
        for &z in &self.wiring[i] {
            idx = (idx << 1) | genome.get(z) as usize;
        }
        idx
    }

    /// Contribution of bit `i` to the objective of `genome`.
    pub fn fitness_contribution(&self, i: usize, genome: &Genome) -> Result<f64> {
        self.check_len(genome)?;
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.n,
            });
        }
        Ok(self.tables[i][self.pattern(i, genome)])
    }

    /// Mean of all bit contributions.
    pub fn evaluate(&self, genome: &Genome) -> Result<f64> {
        self.check_len(genome)?;
        let sum: f64 = (0..self.n)
            .map(|i| self.tables[i][self.pattern(i, genome)])
            .sum();
        Ok(sum / self.n as f64)
    }

    fn check_len(&self, genome: &Genome) -> Result<()> {
        if genome.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: genome.len(),
            });
        }
        Ok(())
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = BufWriter::new(File::create(path)?);
        serde_json::to_writer(
            file,
            &LandscapeFile {
                version: FORMAT_VERSION,
                landscape: self.clone(),
            },
        )?;
        Ok(())
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        let file: LandscapeFile = serde_json::from_reader(BufReader::new(File::open(path)?))?;
        if file.version != FORMAT_VERSION {
            return Err(Error::InvalidLandscape(format!(
                "unsupported landscape format version {}",
                file.version
            )));
        }
        file.landscape.validate()?;
        Ok(file.landscape)
    }
}

fn table_entries(n: usize, k: usize) -> u128 {
    if k + 1 >= 120 {
        return u128::MAX;
    }
    (n as u128) << (k + 1)
}
