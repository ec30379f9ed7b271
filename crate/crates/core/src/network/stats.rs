use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{NodeId, PopulationGraph};
use crate::error::{Error, Result};

/// Topology summary of a population graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    /// Mean shortest-path length over connected ordered pairs. Zero when no
    /// pair is connected.
    pub char_path_length: f64,
    pub degree_average: f64,
    pub degree_histogram: BTreeMap<usize, usize>,
    pub component_count: usize,
    pub node_count: usize,
    pub edge_count: usize,
}

/// Path statistics from a breadth-first search out of every node.
///
/// Pairs in different components are skipped, so `char_path_length` stays
/// finite on disconnected graphs; `component_count` exposes the split.
pub fn network_stats(g: &PopulationGraph) -> Result<NetworkStats> {
    if g.is_empty() {
        return Err(Error::TooFew { needed: 1, got: 0 });
    }
    let index: HashMap<NodeId, usize> = g.nodes().enumerate().map(|(i, n)| (n, i)).collect();
    let adj: Vec<Vec<usize>> = g
        .nodes()
        .map(|n| g.neighbors(n).unwrap().iter().map(|m| index[m]).collect())
        .collect();
    let n = adj.len();

    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::with_capacity(n);
    let mut total: u64 = 0;
    let mut pairs: u64 = 0;
    let mut component = vec![usize::MAX; n];
    let mut components = 0;

    for src in 0..n {
        dist.fill(usize::MAX);
        dist[src] = 0;
        queue.clear();
        queue.push_back(src);
        let new_component = component[src] == usize::MAX;
        if new_component {
            components += 1;
        }
        while let Some(u) = queue.pop_front() {
            if new_component {
                component[u] = components;
            }
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    total += dist[v] as u64;
                    pairs += 1;
                    queue.push_back(v);
                }
            }
        }
    }

    let degree_histogram = g.degree_histogram();
    Ok(NetworkStats {
        char_path_length: if pairs == 0 { 0.0 } else { total as f64 / pairs as f64 },
        degree_average: 2.0 * g.edge_count() as f64 / n as f64,
        degree_histogram,
        component_count: components,
        node_count: n,
        edge_count: g.edge_count(),
    })
}
