//! Fast oracle suite behind the `verify` subcommand.
//!
//! Each check compares the library against an independent brute-force
//! computation. The functions under test can be swapped out, which lets the
//! integration tests confirm that a deliberately broken implementation is
//! caught.

use std::fmt;

use rand::Rng;
use sotea_core::analysis::diversity;
use sotea_core::engine::{run_on, EaConfig, EaState, FitnessMode, Individual, TraceEvent, Variant};
use sotea_core::network::network_stats;
use sotea_core::rng::{stream, Stream};
use sotea_core::{Genome, NkLandscape, NodeId, PopulationGraph};

use crate::orchestrate::{run_points, summary_csv};
use crate::presets::{preset, PRESETS};
use crate::spec::ExperimentSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, failures: Vec<String>, cases: usize) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{cases} cases")
        } else {
            format!("{} of {cases} cases failed; first: {}", failures.len(), failures[0])
        };
        Self { name, passed, detail }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ({})", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// Objective of each individual; `rank(objectives, i)` returns the
/// panmictic epistatic fitness of individual `i`.
pub type RankFn<'a> = &'a dyn Fn(&[f64], usize) -> f64;

pub fn run_all() -> Vec<Check> {
    vec![
        nk_enumeration(),
        diversity_oracle(&|g| diversity(g).unwrap_or(f64::NAN)),
        ring_path_length(),
        panmictic_equivalence(&library_rank),
        cellular_ring_invariant(),
        preset_determinism(),
    ]
}

/// String-rebuilding evaluation, independent of the packed indexing.
fn nk_oracle(l: &NkLandscape, g: &Genome) -> f64 {
    let bits: Vec<char> = g.to_string().chars().collect();
    let total: f64 = (0..l.n())
        .map(|i| {
            let mut s = String::from(bits[i]);
            s.extend(l.wiring()[i].iter().map(|&z| bits[z]));
            l.tables()[i][usize::from_str_radix(&s, 2).unwrap()]
        })
        .sum();
    total / l.n() as f64
}

fn reference_table() -> NkLandscape {
    let listed = [0.94, 0.36, 0.83, 0.20, 0.67, 0.14, 0.71, 0.44];
    let mut table = vec![0.0; 8];
    for (row, &v) in listed.iter().enumerate() {
        let (z1, x, z2) = ((row >> 2) & 1, (row >> 1) & 1, row & 1);
        table[(x << 2) | (z1 << 1) | z2] = v;
    }
    let wiring = (0..8)
        .map(|i| if i == 2 { vec![1, 3] } else { vec![(i + 1) % 8, (i + 2) % 8] })
        .collect();
    let tables = (0..8).map(|i| if i == 2 { table.clone() } else { vec![0.5; 8] }).collect();
    NkLandscape::from_parts(wiring, tables).expect("valid table")
}

pub fn nk_enumeration() -> Check {
    let mut failures = Vec::new();
    let mut cases = 0;
    for n in 1..=12usize {
        for k in 0..=4.min(n - 1) {
            for seed in 0..5u64 {
                let l = NkLandscape::generate(n, k, seed).expect("small landscape");
                for code in 0u32..(1 << n) {
                    let g = Genome::from_bits(&(0..n).map(|b| (code >> b) & 1 == 1).collect::<Vec<_>>());
                    cases += 1;
                    let (got, want) = (l.evaluate(&g).unwrap(), nk_oracle(&l, &g));
                    if got != want {
                        failures.push(format!("n={n} k={k} seed={seed} genome={g}: {got} != {want}"));
                    }
                }
            }
        }
    }
    let l = reference_table();
    for (genome, want) in [("00000000", 0.94), ("01001100", 0.67)] {
        cases += 1;
        let got = l.fitness_contribution(2, &genome.parse().unwrap()).unwrap();
        if got != want {
            failures.push(format!("table row {genome}: {got} != {want}"));
        }
    }
    Check::new("nk_enumeration", failures, cases)
}

/// Mean pairwise Hamming distance over ordered pairs, relative to `N/2`.
fn diversity_double_loop(genomes: &[Genome]) -> f64 {
    let m = genomes.len();
    let n = genomes[0].len();
    let mut total = 0usize;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                total += (0..n).filter(|&b| genomes[i].get(b) != genomes[j].get(b)).count();
            }
        }
    }
    total as f64 / (m * (m - 1)) as f64 / (n as f64 / 2.0)
}

pub fn diversity_oracle(div: &dyn Fn(&[Genome]) -> f64) -> Check {
    let mut failures = Vec::new();
    let mut rng = stream(0xD1, Stream::Init, 0);
    let mut cases = 0;
    let mut check = |label: String, pop: &[Genome], want: f64| {
        let got = div(pop);
        if (got - want).abs() > 1e-12 {
            failures.push(format!("{label}: {got} != {want}"));
        }
    };
    for case in 0..50 {
        let m = rng.gen_range(2..=20);
        let n = rng.gen_range(1..=40);
        let pop: Vec<Genome> = (0..m).map(|_| Genome::random(n, &mut rng)).collect();
        cases += 1;
        check(format!("random population {case}"), &pop, diversity_double_loop(&pop));
    }
    let g = Genome::random(17, &mut rng);
    check("identical".into(), &vec![g.clone(); 6], 0.0);
    check("complementary pair".into(), &[g.clone(), g.complement()], 2.0);
    Check::new("diversity_double_loop", failures, cases + 2)
}

fn floyd_warshall_mean(g: &PopulationGraph) -> f64 {
    let nodes: Vec<NodeId> = g.nodes().collect();
    let m = nodes.len();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; m]; m];
    for i in 0..m {
        d[i][i] = 0;
        for j in 0..m {
            if g.has_edge(nodes[i], nodes[j]) {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    let total: usize = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| i != j).map(|(i, j)| d[i][j]).sum();
    total as f64 / (m * (m - 1)) as f64
}

pub fn ring_path_length() -> Check {
    let mut failures = Vec::new();
    let mut cases = 0;
    for m in 3..=40usize {
        let g = PopulationGraph::new_ring(m).expect("ring");
        let l = network_stats(&g).expect("stats").char_path_length;
        cases += 1;
        let fw = floyd_warshall_mean(&g);
        if (l - fw).abs() > 1e-12 {
            failures.push(format!("M={m}: {l} != Floyd-Warshall {fw}"));
        }
        if m % 2 == 0 {
            let closed = (m * m) as f64 / (4 * (m - 1)) as f64;
            if (l - closed).abs() > 1e-12 {
                failures.push(format!("M={m}: {l} != {closed}"));
            }
        }
    }
    Check::new("ring_path_length", failures, cases)
}

/// Epistatic fitness computed by the engine for a panmictic population.
pub fn library_rank(objectives: &[f64], i: usize) -> f64 {
    let individuals = objectives
        .iter()
        .enumerate()
        .map(|(j, &objective)| Individual {
            id: NodeId(j as u64),
            genome: Genome::zeros(1),
            objective,
            birth_generation: 0,
        })
        .collect();
    let state = EaState::from_parts(Variant::Panmictic, individuals, None).expect("population");
    state.epistatic_fitness(NodeId(i as u64)).expect("member")
}

fn death_sequence(state: &EaState) -> Vec<(NodeId, NodeId, NodeId)> {
    state
        .trace()
        .iter()
        .filter_map(|e| match e {
            TraceEvent::Death {
                selected,
                opponent,
                loser,
                ..
            } => Some((*selected, *opponent, *loser)),
            _ => None,
        })
        .collect()
}

/// Panmictic epistatic fitness must order every pair exactly as the raw
/// objective does, ties included. The engine-level half runs both modes for
/// 200 generations and compares the eliminations and final populations.
pub fn panmictic_equivalence(rank: RankFn<'_>) -> Check {
    let mut failures = Vec::new();
    let mut rng = stream(0xE4, Stream::Init, 0);
    let mut cases = 0;
    for case in 0..200 {
        let m = rng.gen_range(2..=12);
        // coarse objectives so that ties are common
        let objectives: Vec<f64> = (0..m).map(|_| rng.gen_range(0..5) as f64 / 4.0).collect();
        let fitness: Vec<f64> = (0..m).map(|i| rank(&objectives, i)).collect();
        for a in 0..m {
            for b in 0..m {
                cases += 1;
                let want = objectives[a].partial_cmp(&objectives[b]);
                let got = fitness[a].partial_cmp(&fitness[b]);
                if want != got {
                    failures.push(format!(
                        "population {case} {objectives:?}: pair ({a},{b}) orders {got:?}, objective orders {want:?}"
                    ));
                }
            }
        }
    }

    let mut epi = EaConfig::new(Variant::Panmictic, FitnessMode::Epistatic, 50, 30, 14);
    epi.seed = 7;
    epi.generations = 200;
    let mut raw = epi.clone();
    raw.fitness_mode = FitnessMode::Raw;
    let landscape = NkLandscape::generate(epi.n, epi.k_nk, epi.seed).expect("landscape");
    let mut a = EaState::init(&epi, &landscape).expect("init");
    let mut b = EaState::init(&raw, &landscape).expect("init");
    a.set_tracing(true);
    b.set_tracing(true);
    for _ in 0..epi.generations {
        a.run_generation(&epi, &landscape).expect("generation");
        b.run_generation(&raw, &landscape).expect("generation");
    }
    cases += 1;
    if death_sequence(&a) != death_sequence(&b) {
        failures.push("engine elimination sequences differ between modes".into());
    }
    let members = |s: &EaState| s.individuals().map(|i| (i.id, i.genome.clone())).collect::<Vec<_>>();
    if members(&a) != members(&b) {
        failures.push("final populations differ between modes".into());
    }
    Check::new("panmictic_equivalence", failures, cases)
}

pub fn cellular_ring_invariant() -> Check {
    let mut failures = Vec::new();
    let mut config = EaConfig::new(Variant::Cellular, FitnessMode::Epistatic, 50, 30, 14);
    config.seed = 5;
    config.generations = 200;
    let landscape = NkLandscape::generate(config.n, config.k_nk, config.seed).expect("landscape");
    let mut state = EaState::init(&config, &landscape).expect("init");
    for g in 1..=config.generations {
        state.run_generation(&config, &landscape).expect("generation");
        let graph = state.graph().expect("structured");
        if !graph.is_single_cycle() || graph.nodes().any(|n| graph.degree(n).ok() != Some(2)) {
            failures.push(format!("generation {g}: not a single cycle of degree 2"));
        }
    }
    // The metric pipeline must agree with a direct run.
    let (record, _) = run_on(&config, &landscape).expect("run");
    if record.rows.last().and_then(|r| r.degree_average) != Some(2.0) {
        failures.push("recorded k_ave at the final generation is not 2".into());
    }
    Check::new("cellular_ring", failures, config.generations as usize + 1)
}

/// Every bundled preset, cut down to a few generations, is run twice and
/// must produce identical CSV text.
pub fn preset_determinism() -> Check {
    let mut failures = Vec::new();
    let render = |spec: &ExperimentSpec| -> crate::Result<Vec<String>> {
        let points = run_points(spec, 1)?;
        let mut out = vec![summary_csv(&points)];
        for p in &points {
            out.push(p.aggregate.to_csv());
            out.extend(p.records.iter().flat_map(|r| [r.to_csv(), r.degree_csv()]));
        }
        Ok(out)
    };
    for (name, _) in PRESETS {
        let spec = match preset(name) {
            Ok(s) => s.scaled_down(10, 1),
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        match (render(&spec), render(&spec)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Ok(_), Ok(_)) => failures.push(format!("{name}: outputs differ between reruns")),
            (Err(e), _) | (_, Err(e)) => failures.push(format!("{name}: {e}")),
        }
    }
    Check::new("preset_determinism", failures, PRESETS.len())
}

/// One line per check plus a closing tally.
pub fn report(checks: &[Check]) -> String {
    let mut out: String = checks.iter().map(|c| format!("{c}\n")).collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    out.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    out
}
