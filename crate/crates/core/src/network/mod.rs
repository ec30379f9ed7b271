//! The interaction network of a structured population.

mod export;
mod fit;
mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use export::{edge_list_csv, to_dot};
pub use fit::{fit_exponential, fit_linear, fit_log_linear, ExponentialFit, LinearFit};
pub use stats::{network_stats, NetworkStats};

/// Identity of an individual and of its node. Allocated in increasing order
/// and never reused within a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Undirected simple graph. Ordered containers keep every traversal, and
/// therefore every random choice made over a traversal, reproducible.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PopulationGraph {
    adjacency: BTreeMap<NodeId, BTreeSet<NodeId>>,
    edges: usize,
}

impl PopulationGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Cycle on nodes `0..m`, node `i` linked to `i + 1 (mod m)`.
    pub fn new_ring(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::RingTooSmall(m));
        }
        let mut g = Self::new();
        for i in 0..m as u64 {
            g.add_node(NodeId(i))?;
        }
        for i in 0..m as u64 {
            g.add_edge(NodeId(i), NodeId((i + 1) % m as u64))?;
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.adjacency.contains_key(&id)
    }

    /// Node ids in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn neighbors(&self, id: NodeId) -> Result<&BTreeSet<NodeId>> {
        self.adjacency.get(&id).ok_or(Error::UnknownNode(id))
    }

    pub fn degree(&self, id: NodeId) -> Result<usize> {
        self.neighbors(id).map(BTreeSet::len)
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency.get(&a).is_some_and(|n| n.contains(&b))
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adjacency
            .iter()
            .flat_map(|(&a, ns)| ns.range(a..).map(move |&b| (a, b)))
    }

    pub fn add_node(&mut self, id: NodeId) -> Result<()> {
        if self.adjacency.contains_key(&id) {
            return Err(Error::DuplicateNode(id));
        }
        self.adjacency.insert(id, BTreeSet::new());
        Ok(())
    }

    /// Removes `id` together with all of its edges.
    pub fn remove_node(&mut self, id: NodeId) -> Result<()> {
        let ns = self.adjacency.remove(&id).ok_or(Error::UnknownNode(id))?;
        for n in &ns {
            if let Some(set) = self.adjacency.get_mut(n) {
                set.remove(&id);
            }
        }
        self.edges -= ns.len();
        Ok(())
    }

    /// Returns `false` without touching the graph for self-loops and for
    /// edges that already exist.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<bool> {
        self.require(a)?;
        self.require(b)?;
        if a == b || self.has_edge(a, b) {
            return Ok(false);
        }
        self.adjacency.get_mut(&a).unwrap().insert(b);
        self.adjacency.get_mut(&b).unwrap().insert(a);
        self.edges += 1;
        Ok(true)
    }

    pub fn remove_edge(&mut self, a: NodeId, b: NodeId) -> Result<bool> {
        self.require(a)?;
        self.require(b)?;
        if !self.has_edge(a, b) {
            return Ok(false);
        }
        self.adjacency.get_mut(&a).unwrap().remove(&b);
        self.adjacency.get_mut(&b).unwrap().remove(&a);
        self.edges -= 1;
        Ok(true)
    }

    /// The winner takes over every link of the loser it did not already
    /// have, then the loser is removed.
    pub fn transfer_links(&mut self, winner: NodeId, loser: NodeId) -> Result<()> {
        self.require(winner)?;
        let inherited: Vec<NodeId> = self.neighbors(loser)?.iter().copied().collect();
        if winner == loser {
            return Err(Error::SelfTransfer(winner));
        }
        for x in inherited {
            if x != winner {
                self.add_edge(winner, x)?;
            }
        }
        self.remove_node(loser)
    }

    /// Map of degree to number of nodes with that degree.
    pub fn degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for ns in self.adjacency.values() {
            *h.entry(ns.len()).or_insert(0) += 1;
        }
        h
    }

    /// True when the graph is one simple cycle through every node.
    pub fn is_single_cycle(&self) -> bool {
        let n = self.node_count();
        if n < 3 || self.edges != n || self.adjacency.values().any(|ns| ns.len() != 2) {
            return false;
        }
        let start = *self.adjacency.keys().next().unwrap();
        let (mut prev, mut cur) = (start, *self.adjacency[&start].iter().next().unwrap());
        let mut steps = 1;
        while cur != start {
            let next = *self.adjacency[&cur].iter().find(|&&x| x != prev).unwrap();
            prev = cur;
            cur = next;
            steps += 1;
            if steps > n {
                return false;
            }
        }
        steps == n
    }

    /// Checks symmetry, absence of self-loops and the cached edge count.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let mut half_edges = 0;
        for (&a, ns) in &self.adjacency {
            if ns.contains(&a) {
                return Err(format!("self-loop on {a}"));
            }
            for &b in ns {
                match self.adjacency.get(&b) {
                    Some(back) if back.contains(&a) => {}
                    Some(_) => return Err(format!("edge {a}-{b} is not symmetric")),
                    None => return Err(format!("edge {a}-{b} points at a missing node")),
                }
            }
            half_edges += ns.len();
        }
        if half_edges != 2 * self.edges {
            return Err(format!(
                "edge count {} disagrees with adjacency ({half_edges} half-edges)",
                self.edges
            ));
        }
        Ok(())
    }

    fn require(&self, id: NodeId) -> Result<()> {
        if self.contains(id) {
            Ok(())
        } else {
            Err(Error::UnknownNode(id))
        }
    }
}
