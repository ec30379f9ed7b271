//! Runs every (sweep point × replication) of a spec and writes the results.
//!
//! Layout under `<out>/<spec name>/`:
//!
//! ```text
//! manifest.json                 resolved spec, per-run seeds and configs
//! summary.csv                   one line per sweep point
//! aggregate/<label>.csv         mean and sample std per generation
//! runs/<label>/rep<r>.csv       per-run metrics
//! runs/<label>/rep<r>_degrees.csv   degree histograms, when requested
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sotea_core::analysis::{aggregate, AggregateRecord, RunRecord};
use sotea_core::engine::EaConfig;

use crate::error::{HarnessError, Result};
use crate::spec::{ExperimentSpec, RunPlan, SweepPoint};
use crate::CSV_SCHEMA_VERSION;

#[derive(Debug, Clone)]
pub struct PointResult {
    pub point: SweepPoint,
    pub records: Vec<RunRecord>,
    pub aggregate: AggregateRecord,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub dir: PathBuf,
    pub points: Vec<PointResult>,
}

impl ExperimentOutcome {
    pub fn point(&self, pred: impl Fn(&SweepPoint) -> bool) -> Option<&PointResult> {
        self.points.iter().find(|p| pred(&p.point))
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    csv_schema_version: u32,
    command: &'a str,
    spec: &'a ExperimentSpec,
    runs: Vec<ManifestRun<'a>>,
}

#[derive(Serialize)]
struct ManifestRun<'a> {
    label: String,
    replication: usize,
    config: &'a EaConfig,
}

/// Apply `job` to every plan on a pool of `workers` threads (0 picks the
/// rayon default). Results come back in plan order.
pub fn execute_with<T, F>(plans: &[RunPlan], workers: usize, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&RunPlan) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::InvalidSpec(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| plans.par_iter().map(&job).collect())
}

pub fn execute(plans: &[RunPlan], workers: usize) -> Result<Vec<RunRecord>> {
    execute_with(plans, workers, |p| Ok(sotea_core::engine::run(&p.config)?))
}

/// Run the whole experiment in memory, grouped by sweep point.
pub fn run_points(spec: &ExperimentSpec, workers: usize) -> Result<Vec<PointResult>> {
    let plans = spec.plan()?;
    let mut records = execute(&plans, workers)?.into_iter();
    spec.points()
        .into_iter()
        .map(|point| {
            let records: Vec<RunRecord> = records.by_ref().take(spec.replications).collect();
            let aggregate = aggregate(&records)?;
            Ok(PointResult {
                point,
                records,
                aggregate,
            })
        })
        .collect()
}

/// `run` subcommand: execute and write all files.
pub fn run_experiment(spec: &ExperimentSpec, out: &Path, workers: usize) -> Result<ExperimentOutcome> {
    let plans = spec.plan()?;
    let points = run_points(spec, workers)?;
    let dir = out.join(&spec.name);

    for p in &points {
        let label = p.point.label();
        let run_dir = dir.join("runs").join(&label);
        create_dir(&run_dir)?;
        for (r, record) in p.records.iter().enumerate() {
            write_file(&run_dir.join(format!("rep{r}.csv")), &record.to_csv())?;
            if !record.degree_histograms.is_empty() {
                write_file(&run_dir.join(format!("rep{r}_degrees.csv")), &record.degree_csv())?;
            }
        }
        let agg_dir = dir.join("aggregate");
        create_dir(&agg_dir)?;
        write_file(&agg_dir.join(format!("{label}.csv")), &p.aggregate.to_csv())?;
    }
    write_file(&dir.join("summary.csv"), &summary_csv(&points))?;
    write_manifest(&dir, "run", spec, &plans)?;
    Ok(ExperimentOutcome { dir, points })
}

/// One line per sweep point with end-of-run and time-averaged statistics.
pub fn summary_csv(points: &[PointResult]) -> String {
    let mut out = String::from(
        "label,variant,fitness_mode,k_nk,m,replications,final_generation,\
         best_objective_mean,best_objective_std,diversity_full_mean,diversity_full_std,\
         diversity_top20_mean,diversity_top20_std,time_avg_diversity_top20_mean,time_avg_diversity_top20_std\n",
    );
    for p in points {
        let last = p.aggregate.rows.last().expect("records have at least one row");
        let avg: Vec<f64> = p.records.iter().map(|r| r.time_average(|row| row.diversity_top20)).collect();
        let (avg_mean, avg_std) = mean_std(&avg);
        let cell = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            p.point.label(),
            p.point.variant,
            p.point.fitness_mode,
            p.point.k_nk,
            p.point.m,
            p.records.len(),
            last.generation,
            cell(last.mean[0]),
            cell(last.std[0]),
            cell(last.mean[2]),
            cell(last.std[2]),
            cell(last.mean[3]),
            cell(last.std[3]),
            avg_mean,
            avg_std
        )
        .unwrap();
    }
    out
}

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub(crate) fn write_manifest(dir: &Path, command: &str, spec: &ExperimentSpec, plans: &[RunPlan]) -> Result<()> {
    let manifest = Manifest {
        tool: "sotea",
        version: env!("CARGO_PKG_VERSION"),
        csv_schema_version: CSV_SCHEMA_VERSION,
        command,
        spec,
        runs: plans
            .iter()
            .map(|p| ManifestRun {
                label: p.point.label(),
                replication: p.replication,
                config: &p.config,
            })
            .collect(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&dir.join("manifest.json"), &(text + "\n"))
}

pub(crate) fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| HarnessError::io(path, e))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        create_dir(parent)?;
    }
    std::fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}
