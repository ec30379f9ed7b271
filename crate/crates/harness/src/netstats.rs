//! Topology table: path length, mean degree and degree distribution of the
//! interaction network against population size.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sotea_core::engine::{run_on, Variant};
use sotea_core::network::{fit_exponential, fit_linear, fit_log_linear, network_stats, NetworkStats};
use sotea_core::NkLandscape;

use crate::error::Result;
use crate::orchestrate::{execute_with, mean_std, write_file, write_manifest};
use crate::spec::{ExperimentSpec, RunPlan};

#[derive(Debug, Clone, PartialEq)]
pub struct NetRow {
    pub variant: Variant,
    pub m: usize,
    pub replications: usize,
    pub l_mean: f64,
    pub l_std: f64,
    pub k_ave_mean: f64,
    pub k_ave_std: f64,
    pub components_mean: f64,
    /// Panmictic rows are exact values of the complete graph.
    pub analytic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitRow {
    pub variant: Variant,
    pub quantity: String,
    pub model: &'static str,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, Default)]
pub struct NetstatsOutcome {
    pub dir: Option<PathBuf>,
    pub rows: Vec<NetRow>,
    pub fits: Vec<FitRow>,
    /// Degree histograms pooled over replications, per (variant, M).
    pub histograms: BTreeMap<(Variant, usize), BTreeMap<usize, usize>>,
}

impl NetstatsOutcome {
    pub fn fit(&self, variant: Variant, quantity: &str, model: &str) -> Option<&FitRow> {
        self.fits
            .iter()
            .find(|f| f.variant == variant && f.quantity == quantity && f.model == model)
    }

    pub fn row(&self, variant: Variant, m: usize) -> Option<&NetRow> {
        self.rows.iter().find(|r| r.variant == variant && r.m == m)
    }

    pub fn table_csv(&self) -> String {
        let mut out = String::from("variant,m,replications,L_mean,L_std,k_ave_mean,k_ave_std,components_mean,source\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.variant,
                r.m,
                r.replications,
                r.l_mean,
                r.l_std,
                r.k_ave_mean,
                r.k_ave_std,
                r.components_mean,
                if r.analytic { "analytic" } else { "simulated" }
            )
            .unwrap();
        }
        out
    }

    pub fn fits_csv(&self) -> String {
        let mut out = String::from("variant,quantity,model,slope,intercept,r_squared\n");
        for f in &self.fits {
            writeln!(out, "{},{},{},{},{},{}", f.variant, f.quantity, f.model, f.slope, f.intercept, f.r_squared).unwrap();
        }
        out
    }

    pub fn histograms_csv(&self) -> String {
        let mut out = String::from("variant,m,degree,count\n");
        for ((v, m), h) in &self.histograms {
            for (d, c) in h {
                writeln!(out, "{v},{m},{d},{c}").unwrap();
            }
        }
        out
    }
}

/// The spec's runs, stopped at the measurement generation.
pub fn measurement_plans(spec: &ExperimentSpec) -> Result<Vec<RunPlan>> {
    let mut plans = spec.plan()?;
    let measure = spec.outputs.measure_generation;
    for p in &mut plans {
        p.config.generations = measure;
        p.config.snapshot_generations = vec![measure];
    }
    Ok(plans)
}

/// Simulate every structured point to `outputs.measure_generation`, or
/// fill in the exact complete-graph values for panmictic points.
pub fn compute(spec: &ExperimentSpec, workers: usize) -> Result<NetstatsOutcome> {
    let plans = measurement_plans(spec)?;
    let structured: Vec<RunPlan> = plans.iter().filter(|p| p.point.variant.is_structured()).cloned().collect();
    let stats: Vec<NetworkStats> = execute_with(&structured, workers, |p| {
        let landscape = NkLandscape::generate(p.config.n, p.config.k_nk, p.config.seed)?;
        let (_, state) = run_on(&p.config, &landscape)?;
        Ok(network_stats(state.graph().expect("structured variant"))?)
    })?;

    let mut outcome = NetstatsOutcome::default();
    let mut by_point: BTreeMap<(Variant, usize), Vec<NetworkStats>> = BTreeMap::new();
    for (p, s) in structured.iter().zip(stats) {
        by_point.entry((p.point.variant, p.point.m)).or_default().push(s);
    }

    for point in spec.points() {
        let key = (point.variant, point.m);
        if outcome.rows.iter().any(|r| (r.variant, r.m) == key) {
            continue;
        }
        if !point.variant.is_structured() {
            outcome.rows.push(NetRow {
                variant: point.variant,
                m: point.m,
                replications: spec.replications,
                l_mean: 1.0,
                l_std: 0.0,
                k_ave_mean: (point.m - 1) as f64,
                k_ave_std: 0.0,
                components_mean: 1.0,
                analytic: true,
            });
            outcome.histograms.insert(key, BTreeMap::from([(point.m - 1, point.m)]));
            continue;
        }
        let runs = &by_point[&key];
        let (l_mean, l_std) = mean_std(&runs.iter().map(|s| s.char_path_length).collect::<Vec<_>>());
        let (k_ave_mean, k_ave_std) = mean_std(&runs.iter().map(|s| s.degree_average).collect::<Vec<_>>());
        let (components_mean, _) = mean_std(&runs.iter().map(|s| s.component_count as f64).collect::<Vec<_>>());
        let mut pooled = BTreeMap::new();
        for s in runs {
            for (d, c) in &s.degree_histogram {
                *pooled.entry(*d).or_insert(0) += c;
            }
        }
        outcome.histograms.insert(key, pooled);
        outcome.rows.push(NetRow {
            variant: point.variant,
            m: point.m,
            replications: runs.len(),
            l_mean,
            l_std,
            k_ave_mean,
            k_ave_std,
            components_mean,
            analytic: false,
        });
    }

    let variants: Vec<Variant> = {
        let mut v: Vec<Variant> = outcome.rows.iter().map(|r| r.variant).collect();
        v.dedup();
        v
    };
    for variant in variants {
        if !variant.is_structured() {
            continue;
        }
        let rows: Vec<&NetRow> = outcome.rows.iter().filter(|r| r.variant == variant).collect();
        let l_points: Vec<(f64, f64)> = rows.iter().map(|r| (r.m as f64, r.l_mean)).collect();
        let k_points: Vec<(f64, f64)> = rows.iter().map(|r| (r.m as f64, r.k_ave_mean)).collect();
        let mut push = |quantity: String, model: &'static str, slope: f64, intercept: f64, r_squared: f64| {
            outcome.fits.push(FitRow {
                variant,
                quantity,
                model,
                slope,
                intercept,
                r_squared,
            })
        };
        if let Ok(f) = fit_log_linear(&l_points) {
            push("L".into(), "log", f.slope, f.intercept, f.r_squared);
        }
        if let Ok(f) = fit_linear(&l_points) {
            push("L".into(), "linear", f.slope, f.intercept, f.r_squared);
        }
        if let Ok(f) = fit_log_linear(&k_points) {
            push("k_ave".into(), "log", f.slope, f.intercept, f.r_squared);
        }
        let mut all = BTreeMap::new();
        for r in &rows {
            let h = &outcome.histograms[&(variant, r.m)];
            for (d, c) in h {
                *all.entry(*d).or_insert(0) += c;
            }
            if let Ok(f) = fit_exponential(h) {
                push(format!("degree_m{}", r.m), "exponential", -f.rate, f.amplitude.ln(), f.r_squared);
            }
        }
        if let Ok(f) = fit_exponential(&all) {
            push("degree".into(), "exponential", -f.rate, f.amplitude.ln(), f.r_squared);
        }
    }
    Ok(outcome)
}

/// `netstats` subcommand: compute and write `table1.csv`,
/// `table1_fits.csv`, `degree_histograms.csv` and the manifest.
pub fn run_netstats(spec: &ExperimentSpec, out: &Path, workers: usize) -> Result<NetstatsOutcome> {
    let plans = measurement_plans(spec)?;
    let mut outcome = compute(spec, workers)?;
    let dir = out.join(&spec.name);
    write_file(&dir.join("table1.csv"), &outcome.table_csv())?;
    write_file(&dir.join("table1_fits.csv"), &outcome.fits_csv())?;
    write_file(&dir.join("degree_histograms.csv"), &outcome.histograms_csv())?;
    write_manifest(&dir, "netstats", spec, &plans)?;
    outcome.dir = Some(dir);
    Ok(outcome)
}
