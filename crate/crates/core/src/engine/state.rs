use indexmap::IndexMap;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{EaConfig, FitnessMode, Variant};
use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::network::{NodeId, PopulationGraph};
use crate::nk::NkLandscape;
use crate::rng::{self, SimRng, Stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub id: NodeId,
    pub genome: Genome,
    /// Cached NK objective of `genome`.
    pub objective: f64,
    pub birth_generation: u64,
}

/// Debug trace of one atomic event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    Birth {
        generation: u64,
        parent: NodeId,
        offspring: NodeId,
    },
    Death {
        generation: u64,
        selected: NodeId,
        opponent: NodeId,
        loser: NodeId,
        winner_fitness: f64,
        loser_fitness: f64,
    },
    IsolatedSelection {
        generation: u64,
        id: NodeId,
    },
}

/// The living population of one run.
///
/// For structured variants the keys of `population` and the nodes of the
/// graph are the same set after every atomic event. Panmictic runs keep no
/// graph; their interaction network is implicitly complete.
#[derive(Debug, Clone)]
pub struct EaState {
    variant: Variant,
    population: IndexMap<NodeId, Individual>,
    graph: Option<PopulationGraph>,
    generation: u64,
    next_id: u64,
    isolated_selections: u64,
    trace: Option<Vec<TraceEvent>>,
}

impl EaState {
    /// `M` uniform-random genomes with ids `0..M`; structured variants are
    /// linked into a ring in id order.
    pub fn init(config: &EaConfig, landscape: &NkLandscape) -> Result<Self> {
        config.validate()?;
        if landscape.n() != config.n {
            return Err(Error::InvalidConfig(format!(
                "landscape has n={} but the configuration asks for n={}",
                landscape.n(),
                config.n
            )));
        }
        let mut rng = rng::stream(config.seed, Stream::Init, 0);
        let mut population = IndexMap::with_capacity(2 * config.m);
        for i in 0..config.m as u64 {
            let genome = Genome::random(config.n, &mut rng);
            let objective = landscape.evaluate(&genome)?;
            let id = NodeId(i);
            population.insert(
                id,
                Individual {
                    id,
                    genome,
                    objective,
                    birth_generation: 0,
                },
            );
        }
        let graph = if config.variant.is_structured() {
            Some(PopulationGraph::new_ring(config.m)?)
        } else {
            None
        };
        Ok(Self {
            variant: config.variant,
            population,
            graph,
            generation: 0,
            next_id: config.m as u64,
            isolated_selections: 0,
            trace: None,
        })
    }

    /// Build a state from explicit individuals and graph. Used to set up
    /// hand-made scenarios; ids must match the graph nodes when a graph is
    /// given.
    pub fn from_parts(variant: Variant, individuals: Vec<Individual>, graph: Option<PopulationGraph>) -> Result<Self> {
        if variant.is_structured() != graph.is_some() {
            return Err(Error::InvalidConfig(
                "structured variants need a graph and panmictic ones must not have one".into(),
            ));
        }
        let next_id = individuals.iter().map(|i| i.id.0 + 1).max().unwrap_or(0);
        let population: IndexMap<NodeId, Individual> = individuals.into_iter().map(|i| (i.id, i)).collect();
        if let Some(g) = &graph {
            if g.node_count() != population.len() || g.nodes().any(|n| !population.contains_key(&n)) {
                return Err(Error::InvalidConfig("population ids and graph nodes differ".into()));
            }
        }
        Ok(Self {
            variant,
            population,
            graph,
            generation: 0,
            next_id,
            isolated_selections: 0,
            trace: None,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn len(&self) -> usize {
        self.population.len()
    }

    pub fn is_empty(&self) -> bool {
        self.population.is_empty()
    }

    pub fn individual(&self, id: NodeId) -> Result<&Individual> {
        self.population.get(&id).ok_or(Error::UnknownNode(id))
    }

    pub fn individuals(&self) -> impl Iterator<Item = &Individual> {
        self.population.values()
    }

    pub fn graph(&self) -> Option<&PopulationGraph> {
        self.graph.as_ref()
    }

    /// Number of competitions that picked a node without neighbors.
    pub fn isolated_selections(&self) -> u64 {
        self.isolated_selections
    }

    /// Start (or stop) recording [`TraceEvent`]s.
    pub fn set_tracing(&mut self, on: bool) {
        self.trace = if on { Some(Vec::new()) } else { None };
    }

    pub fn trace(&self) -> &[TraceEvent] {
        self.trace.as_deref().unwrap_or(&[])
    }

    /// Checks that the population and graph agree and the graph is simple.
    pub fn audit(&self) -> std::result::Result<(), String> {
        if let Some(g) = &self.graph {
            g.audit()?;
            if g.node_count() != self.population.len() || g.nodes().any(|n| !self.population.contains_key(&n)) {
                return Err("population ids and graph nodes differ".into());
            }
        }
        for (id, ind) in &self.population {
            if *id != ind.id {
                return Err(format!("individual {} filed under {id}", ind.id));
            }
        }
        Ok(())
    }

    fn objective(&self, id: NodeId) -> Result<f64> {
        Ok(self.individual(id)?.objective)
    }

    /// Rank-based fitness within the neighborhood: `(k - b) / k` where `k`
    /// is the neighborhood size and `b` the number of neighbors whose
    /// objective is at least as high. Rank 1 (fitness 1) therefore means
    /// strictly better than every neighbor, and identical clones side by
    /// side pull each other down. Panmictic neighborhoods are everyone else
    /// alive. An isolated node scores 1.
    pub fn epistatic_fitness(&self, id: NodeId) -> Result<f64> {
        let own = self.objective(id)?;
        let (k, better) = match &self.graph {
            Some(g) => {
                let ns = g.neighbors(id)?;
                let mut better = 0usize;
                for n in ns {
                    if self.objective(*n)? >= own {
                        better += 1;
                    }
                }
                (ns.len(), better)
            }
            None => {
                let better = self
                    .population
                    .values()
                    .filter(|i| i.objective >= own)
                    .count()
                    - 1;
                (self.population.len() - 1, better)
            }
        };
        if k == 0 {
            return Ok(1.0);
        }
        Ok((k - better) as f64 / k as f64)
    }

    pub fn effective_fitness(&self, id: NodeId, mode: FitnessMode) -> Result<f64> {
        match mode {
            FitnessMode::Raw => self.objective(id),
            FitnessMode::Epistatic => self.epistatic_fitness(id),
        }
    }

    fn spawn(&mut self, parent: NodeId, config: &EaConfig, landscape: &NkLandscape, rng: &mut SimRng) -> Result<NodeId> {
        let genome = self.individual(parent)?.genome.mutated(config.mutation_rate, rng);
        let objective = landscape.evaluate(&genome)?;
        let id = NodeId(self.next_id);
        self.next_id += 1;
        self.population.insert(
            id,
            Individual {
                id,
                genome,
                objective,
                birth_generation: self.generation,
            },
        );
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEvent::Birth {
                generation: self.generation,
                parent,
                offspring: id,
            });
        }
        Ok(id)
    }

    /// Clone-and-mutate without any graph bookkeeping.
    pub fn reproduce_panmictic(&mut self, parent: NodeId, config: &EaConfig, landscape: &NkLandscape, rng: &mut SimRng) -> Result<NodeId> {
        self.spawn(parent, config, landscape, rng)
    }

    /// The offspring is linked to its parent and copies each of the
    /// parent's earlier links with probability `p_add`; every copied link is
    /// then dropped by the parent with probability `p_remove`.
    pub fn reproduce_sotea(&mut self, parent: NodeId, config: &EaConfig, landscape: &NkLandscape, rng: &mut SimRng) -> Result<NodeId> {
        let links: Vec<NodeId> = self.structured_graph()?.neighbors(parent)?.iter().copied().collect();
        let child = self.spawn(parent, config, landscape, rng)?;
        let g = self.graph.as_mut().unwrap();
        g.add_node(child)?;
        g.add_edge(child, parent)?;
        for x in links {
            if rng.gen_bool(config.p_add) {
                g.add_edge(child, x)?;
                if rng.gen_bool(config.p_remove) {
                    g.remove_edge(parent, x)?;
                }
            }
        }
        Ok(child)
    }

    /// The offspring is spliced into one of the parent's links, picked
    /// uniformly, so a ring stays a ring.
    pub fn reproduce_cellular(&mut self, parent: NodeId, config: &EaConfig, landscape: &NkLandscape, rng: &mut SimRng) -> Result<NodeId> {
        let g = self.structured_graph()?;
        let links = g.neighbors(parent)?;
        if links.is_empty() {
            return Err(Error::NoLinks(parent));
        }
        let moved = *links.iter().nth(rng.gen_range(0..links.len())).unwrap();
        let child = self.spawn(parent, config, landscape, rng)?;
        let g = self.graph.as_mut().unwrap();
        g.add_node(child)?;
        g.remove_edge(parent, moved)?;
        g.add_edge(child, moved)?;
        g.add_edge(child, parent)?;
        Ok(child)
    }

    pub fn reproduce(&mut self, parent: NodeId, config: &EaConfig, landscape: &NkLandscape, rng: &mut SimRng) -> Result<NodeId> {
        match self.variant {
            Variant::Panmictic => self.reproduce_panmictic(parent, config, landscape, rng),
            Variant::Cellular => self.reproduce_cellular(parent, config, landscape, rng),
            Variant::Sotea => self.reproduce_sotea(parent, config, landscape, rng),
        }
    }

    /// `id` challenges its least fit neighbor; the worse of the pair dies
    /// and the survivor inherits its links. Fitness is evaluated on the
    /// graph as it stands. Returns the survivor, or `id` unchanged when it
    /// has no neighbors.
    pub fn compete_structured(&mut self, id: NodeId, mode: FitnessMode, rng: &mut SimRng) -> Result<NodeId> {
        let neighbors: Vec<NodeId> = self.structured_graph()?.neighbors(id)?.iter().copied().collect();
        if neighbors.is_empty() {
            self.isolated_selections += 1;
            if let Some(trace) = &mut self.trace {
                trace.push(TraceEvent::IsolatedSelection {
                    generation: self.generation,
                    id,
                });
            }
            return Ok(id);
        }
        let mut worst = Vec::with_capacity(neighbors.len());
        let mut worst_fitness = f64::INFINITY;
        for n in neighbors {
            let f = self.effective_fitness(n, mode)?;
            if f < worst_fitness {
                worst_fitness = f;
                worst.clear();
                worst.push(n);
            } else if f == worst_fitness {
                worst.push(n);
            }
        }
        let challenger = if worst.len() == 1 {
            worst[0]
        } else {
            worst[rng.gen_range(0..worst.len())]
        };
        let own = self.effective_fitness(id, mode)?;
        let (winner, loser) = duel(id, own, challenger, worst_fitness, rng);
        self.record_death(id, challenger, winner, loser);
        self.graph.as_mut().unwrap().transfer_links(winner.0, loser.0)?;
        self.population.swap_remove(&loser.0);
        Ok(winner.0)
    }

    /// Binary tournament against a uniformly drawn other individual.
    pub fn compete_panmictic(&mut self, id: NodeId, mode: FitnessMode, rng: &mut SimRng) -> Result<NodeId> {
        let len = self.population.len();
        if len < 2 {
            return Err(Error::TooFew { needed: 2, got: len });
        }
        let own_index = self.population.get_index_of(&id).ok_or(Error::UnknownNode(id))?;
        let mut j = rng.gen_range(0..len - 1);
        if j >= own_index {
            j += 1;
        }
        let opponent = *self.population.get_index(j).unwrap().0;
        let own = self.effective_fitness(id, mode)?;
        let other = self.effective_fitness(opponent, mode)?;
        let (winner, loser) = duel(id, own, opponent, other, rng);
        self.record_death(id, opponent, winner, loser);
        self.population.swap_remove(&loser.0);
        Ok(winner.0)
    }

    pub fn compete(&mut self, id: NodeId, mode: FitnessMode, rng: &mut SimRng) -> Result<NodeId> {
        match self.variant {
            Variant::Panmictic => self.compete_panmictic(id, mode, rng),
            _ => self.compete_structured(id, mode, rng),
        }
    }

    fn record_death(&mut self, selected: NodeId, opponent: NodeId, winner: (NodeId, f64), loser: (NodeId, f64)) {
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEvent::Death {
                generation: self.generation,
                selected,
                opponent,
                loser: loser.0,
                winner_fitness: winner.1,
                loser_fitness: loser.1,
            });
        }
    }

    /// One full generation: `M` births from generation-start parents, then
    /// competitions until `M` individuals have died.
    ///
    /// Selecting an isolated node is a no-op and does not count towards the
    /// `M` deaths.
    pub fn run_generation(&mut self, config: &EaConfig, landscape: &NkLandscape) -> Result<()> {
        let m = config.m;
        if self.population.len() != m {
            return Err(Error::InvalidConfig(format!(
                "population holds {} individuals, expected {m}",
                self.population.len()
            )));
        }
        let parents: Vec<NodeId> = self.population.keys().copied().collect();
        let mut rng = rng::stream(config.seed, Stream::Reproduction, self.generation);
        for _ in 0..m {
            let parent = parents[rng.gen_range(0..parents.len())];
            self.reproduce(parent, config, landscape, &mut rng)?;
        }

        let mut rng = rng::stream(config.seed, Stream::Competition, self.generation);
        let target = m;
        while self.population.len() > target {
            if let Some(g) = &self.graph {
                if g.edge_count() == 0 {
                    return Err(Error::InvalidConfig(
                        "every node is isolated; no competition can take place".into(),
                    ));
                }
            }
            let pick = rng.gen_range(0..self.population.len());
            let id = *self.population.get_index(pick).unwrap().0;
            self.compete(id, config.fitness_mode, &mut rng)?;
        }
        self.generation += 1;
        Ok(())
    }

    fn structured_graph(&self) -> Result<&PopulationGraph> {
        self.graph.as_ref().ok_or(Error::NotStructured)
    }
}

/// Returns `(winner, loser)` with their fitness; ties are settled by a fair
/// coin.
fn duel(a: NodeId, fa: f64, b: NodeId, fb: f64, rng: &mut SimRng) -> ((NodeId, f64), (NodeId, f64)) {
    let a_loses = if fa == fb { rng.gen_bool(0.5) } else { fa < fb };
    if a_loses {
        ((b, fb), (a, fa))
    } else {
        ((a, fa), (b, fb))
    }
}
