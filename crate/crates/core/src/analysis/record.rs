use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::diversity::{diversity, top_fraction};
use crate::engine::EaState;
use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::network::network_stats;

/// Metric columns of a run, in CSV order after `generation`.
pub const COLUMNS: [&str; 7] = [
    "best_objective",
    "mean_objective",
    "diversity_full",
    "diversity_top20",
    "L",
    "k_ave",
    "components",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub generation: u64,
    pub best_objective: f64,
    pub mean_objective: f64,
    pub diversity_full: f64,
    /// Diversity of the best `top_fraction` of the population; 0 when that
    /// subset holds a single individual.
    pub diversity_top20: f64,
    pub char_path_length: Option<f64>,
    pub degree_average: Option<f64>,
    pub components: Option<usize>,
}

impl MetricsRow {
    pub fn values(&self) -> [Option<f64>; 7] {
        [
            Some(self.best_objective),
            Some(self.mean_objective),
            Some(self.diversity_full),
            Some(self.diversity_top20),
            self.char_path_length,
            self.degree_average,
            self.components.map(|c| c as f64),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeSnapshot {
    pub generation: u64,
    pub histogram: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Strictly increasing in `generation`.
    pub rows: Vec<MetricsRow>,
    pub degree_histograms: Vec<DegreeSnapshot>,
    pub isolated_selections: u64,
}

impl RunRecord {
    pub fn row_at(&self, generation: u64) -> Option<&MetricsRow> {
        self.rows
            .binary_search_by_key(&generation, |r| r.generation)
            .ok()
            .map(|i| &self.rows[i])
    }

    pub fn last(&self) -> Option<&MetricsRow> {
        self.rows.last()
    }

    /// Mean of `f` over all recorded rows.
    pub fn time_average(&self, f: impl Fn(&MetricsRow) -> f64) -> f64 {
        if self.rows.is_empty() {
            return f64::NAN;
        }
        self.rows.iter().map(f).sum::<f64>() / self.rows.len() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("generation,{}\n", COLUMNS.join(","));
        for r in &self.rows {
            write!(out, "{}", r.generation).unwrap();
            for v in r.values() {
                out.push(',');
                if let Some(v) = v {
                    write!(out, "{v}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }

    /// `generation,degree,count` rows for every captured histogram.
    pub fn degree_csv(&self) -> String {
        let mut out = String::from("generation,degree,count\n");
        for snap in &self.degree_histograms {
            for (d, c) in &snap.histogram {
                writeln!(out, "{},{d},{c}", snap.generation).unwrap();
            }
        }
        out
    }
}

/// Snapshot of the population's objective, diversity and (optionally)
/// topology statistics.
pub fn metrics_row(state: &EaState, top: f64, with_network: bool) -> Result<MetricsRow> {
    if state.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            got: state.len(),
        });
    }
    let mut best = f64::NEG_INFINITY;
    let mut sum = 0.0;
    let genomes: Vec<&Genome> = state
        .individuals()
        .map(|i| {
            best = best.max(i.objective);
            sum += i.objective;
            &i.genome
        })
        .collect();
    let elite: Vec<&Genome> = top_fraction(state.individuals(), top)?
        .into_iter()
        .map(|i| &i.genome)
        .collect();
    let diversity_top20 = if elite.len() < 2 { 0.0 } else { diversity(&elite)? };

    let (mut char_path_length, mut degree_average, mut components) = (None, None, None);
    if with_network {
        if let Some(g) = state.graph() {
            let s = network_stats(g)?;
            char_path_length = Some(s.char_path_length);
            degree_average = Some(s.degree_average);
            components = Some(s.component_count);
        }
    }
    Ok(MetricsRow {
        generation: state.generation(),
        best_objective: best,
        mean_objective: sum / state.len() as f64,
        diversity_full: diversity(&genomes)?,
        diversity_top20,
        char_path_length,
        degree_average,
        components,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub generation: u64,
    /// Column-wise mean, in [`COLUMNS`] order.
    pub mean: Vec<Option<f64>>,
    /// Column-wise sample standard deviation; 0 for a single record.
    pub std: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRecord {
    pub replications: usize,
    pub rows: Vec<AggregateRow>,
}

impl AggregateRecord {
    pub fn row_at(&self, generation: u64) -> Option<&AggregateRow> {
        self.rows.iter().find(|r| r.generation == generation)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("generation,replications");
        for c in COLUMNS {
            write!(out, ",{c}_mean,{c}_std").unwrap();
        }
        out.push('\n');
        for r in &self.rows {
            write!(out, "{},{}", r.generation, self.replications).unwrap();
            for (m, s) in r.mean.iter().zip(&r.std) {
                out.push(',');
                if let Some(m) = m {
                    write!(out, "{m}").unwrap();
                }
                out.push(',');
                if let Some(s) = s {
                    write!(out, "{s}").unwrap();
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Mean and sample standard deviation across replications, row by row.
pub fn aggregate(records: &[RunRecord]) -> Result<AggregateRecord> {
    let first = records.first().ok_or(Error::TooFew { needed: 1, got: 0 })?;
    for (i, r) in records.iter().enumerate() {
        if r.rows.len() != first.rows.len() {
            return Err(Error::ShapeMismatch(format!(
                "record {i} has {} rows, record 0 has {}",
                r.rows.len(),
                first.rows.len()
            )));
        }
    }
    let n = records.len() as f64;
    let mut rows = Vec::with_capacity(first.rows.len());
    for (idx, head) in first.rows.iter().enumerate() {
        let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::with_capacity(records.len()); COLUMNS.len()];
        for (i, r) in records.iter().enumerate() {
            let row = &r.rows[idx];
            if row.generation != head.generation {
                return Err(Error::ShapeMismatch(format!(
                    "record {i} row {idx} is generation {}, expected {}",
                    row.generation, head.generation
                )));
            }
            for (c, v) in row.values().into_iter().enumerate() {
                columns[c].push(v);
            }
        }
        let mut mean = Vec::with_capacity(COLUMNS.len());
        let mut std = Vec::with_capacity(COLUMNS.len());
        for (c, values) in columns.iter().enumerate() {
            let present: Option<Vec<f64>> = values.iter().copied().collect();
            match present {
                Some(v) => {
                    let mu = v.iter().sum::<f64>() / n;
                    let sd = if v.len() < 2 {
                        0.0
                    } else {
                        (v.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
                    };
                    mean.push(Some(mu));
                    std.push(Some(sd));
                }
                None if values.iter().all(Option::is_none) => {
                    mean.push(None);
                    std.push(None);
                }
                None => {
                    return Err(Error::ShapeMismatch(format!(
                        "column {} at generation {} is missing in some records",
                        COLUMNS[c], head.generation
                    )))
                }
            }
        }
        rows.push(AggregateRow {
            generation: head.generation,
            mean,
            std,
        });
    }
    Ok(AggregateRecord {
        replications: records.len(),
        rows,
    })
}
