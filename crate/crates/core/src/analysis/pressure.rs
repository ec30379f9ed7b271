use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::engine::{EaState, FitnessMode};
use crate::error::{Error, Result};
use crate::network::NodeId;

/// Directed pair from a node to the neighbor it would challenge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureEdge {
    pub source: NodeId,
    pub target: NodeId,
    pub source_fitness: f64,
    pub target_fitness: f64,
}

/// One mock competition per non-isolated node: an edge to the neighbor with
/// the lowest effective fitness, lower id on ties. The state is not
/// modified.
pub fn selection_pressure_edges(state: &EaState, mode: FitnessMode) -> Result<Vec<PressureEdge>> {
    let graph = state.graph().ok_or(Error::NotStructured)?;
    let mut edges = Vec::new();
    for source in graph.nodes() {
        let mut best: Option<(NodeId, f64)> = None;
        // ascending ids, so strict `<` keeps the lower id on ties
        for &n in graph.neighbors(source)? {
            let f = state.effective_fitness(n, mode)?;
            if best.is_none_or(|(_, bf)| f < bf) {
                best = Some((n, f));
            }
        }
        if let Some((target, target_fitness)) = best {
            edges.push(PressureEdge {
                source,
                target,
                source_fitness: state.effective_fitness(source, mode)?,
                target_fitness,
            });
        }
    }
    Ok(edges)
}

pub fn pressure_csv(edges: &[PressureEdge]) -> String {
    let mut out = String::from("source,target,source_fitness,target_fitness\n");
    for e in edges {
        writeln!(out, "{},{},{},{}", e.source, e.target, e.source_fitness, e.target_fitness).unwrap();
    }
    out
}

/// `id,degree,objective,epistatic_fitness,birth_generation` for every node
/// of a structured population, ascending id.
pub fn node_attributes_csv(state: &EaState) -> Result<String> {
    let graph = state.graph().ok_or(Error::NotStructured)?;
    let mut out = String::from("id,degree,objective,epistatic_fitness,birth_generation\n");
    for id in graph.nodes() {
        let ind = state.individual(id)?;
        writeln!(
            out,
            "{},{},{},{},{}",
            id,
            graph.degree(id)?,
            ind.objective,
            state.epistatic_fitness(id)?,
            ind.birth_generation
        )
        .unwrap();
    }
    Ok(out)
}
