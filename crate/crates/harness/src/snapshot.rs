//! Frozen-network export for offline inspection of selection pressure.
//!
//! For each structured sweep point, replication 0 is run to the requested
//! generation and written to `<out>/<name>/snapshot-g<G>/<label>/`.

use std::path::{Path, PathBuf};

use sotea_core::analysis::{node_attributes_csv, pressure_csv, selection_pressure_edges, PressureEdge};
use sotea_core::engine::{run_on, EaState, FitnessMode};
use sotea_core::network::{edge_list_csv, to_dot};
use sotea_core::NkLandscape;

use crate::error::{HarnessError, Result};
use crate::orchestrate::{write_file, write_manifest};
use crate::spec::{ExperimentSpec, RunPlan};

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub plan: RunPlan,
    pub state: EaState,
    pub epistatic: Vec<PressureEdge>,
    pub raw: Vec<PressureEdge>,
}

impl Snapshot {
    /// Sources whose pressure target changes between the two fitness views.
    pub fn divergent_sources(&self) -> Vec<sotea_core::NodeId> {
        self.epistatic
            .iter()
            .zip(&self.raw)
            .filter(|(e, r)| e.target != r.target)
            .map(|(e, _)| e.source)
            .collect()
    }
}

/// Run `plan` to `generation` and compute pressure edges in both modes.
pub fn take(plan: &RunPlan, generation: u64) -> Result<Snapshot> {
    if !plan.point.variant.is_structured() {
        return Err(HarnessError::InvalidSpec(format!(
            "snapshot needs a structured variant, got {}",
            plan.point.variant
        )));
    }
    let mut config = plan.config.clone();
    config.generations = generation;
    config.network_stride = 0;
    config.snapshot_generations.clear();
    let landscape = NkLandscape::generate(config.n, config.k_nk, config.seed)?;
    let (_, state) = run_on(&config, &landscape)?;
    let epistatic = selection_pressure_edges(&state, FitnessMode::Epistatic)?;
    let raw = selection_pressure_edges(&state, FitnessMode::Raw)?;
    Ok(Snapshot {
        plan: RunPlan { config, ..plan.clone() },
        state,
        epistatic,
        raw,
    })
}

/// `snapshot` subcommand. Returns the directories written, one per point.
pub fn run_snapshot(spec: &ExperimentSpec, out: &Path, generation: u64) -> Result<Vec<PathBuf>> {
    let plans: Vec<RunPlan> = spec.plan()?.into_iter().filter(|p| p.replication == 0).collect();
    if let Some(p) = plans.iter().find(|p| !p.point.variant.is_structured()) {
        return Err(HarnessError::InvalidSpec(format!(
            "snapshot needs a structured variant, got {}",
            p.point.variant
        )));
    }
    let snapshots = plans.iter().map(|p| take(p, generation)).collect::<Result<Vec<_>>>()?;

    let root = out.join(&spec.name).join(format!("snapshot-g{generation}"));
    let mut dirs = Vec::new();
    for s in &snapshots {
        let label = s.plan.point.label();
        let dir = root.join(&label);
        let graph = s.state.graph().expect("structured variant");
        write_file(&dir.join("graph.dot"), &to_dot(graph, &label.replace('-', "_")))?;
        write_file(&dir.join("edges.csv"), &edge_list_csv(graph))?;
        write_file(&dir.join("nodes.csv"), &node_attributes_csv(&s.state)?)?;
        write_file(&dir.join("pressure_epistatic.csv"), &pressure_csv(&s.epistatic))?;
        write_file(&dir.join("pressure_raw.csv"), &pressure_csv(&s.raw))?;
        dirs.push(dir);
    }
    write_manifest(&root, "snapshot", spec, &plans)?;
    Ok(dirs)
}
