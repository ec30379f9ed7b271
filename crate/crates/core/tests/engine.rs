use sotea_core::engine::{run, run_on, EaConfig, EaState, FitnessMode, Individual, TraceEvent, Variant};
use sotea_core::rng::{stream, SimRng, Stream};
use sotea_core::{Genome, NkLandscape, NodeId, PopulationGraph};

fn ind(id: u64, objective: f64) -> Individual {
    Individual {
        id: NodeId(id),
        genome: Genome::zeros(8),
        objective,
        birth_generation: 0,
    }
}

fn graph(n: u64, edges: &[(u64, u64)]) -> PopulationGraph {
    let mut g = PopulationGraph::new();
    for i in 0..n {
        g.add_node(NodeId(i)).unwrap();
    }
    for &(a, b) in edges {
        g.add_edge(NodeId(a), NodeId(b)).unwrap();
    }
    g
}

fn star(objectives: &[f64]) -> EaState {
    let n = objectives.len() as u64;
    let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
    let pop = objectives.iter().enumerate().map(|(i, &o)| ind(i as u64, o)).collect();
    EaState::from_parts(Variant::Sotea, pop, Some(graph(n, &edges))).unwrap()
}

fn rng(seed: u64) -> SimRng {
    stream(seed, Stream::Competition, 1234)
}

fn small_config(variant: Variant) -> (EaConfig, NkLandscape) {
    let mut c = EaConfig::new(variant, FitnessMode::Epistatic, 20, 16, 3);
    c.seed = 17;
    let l = NkLandscape::generate(c.n, c.k_nk, c.seed).unwrap();
    (c, l)
}

/// State whose genomes match the landscape, on the given graph.
fn evaluated_state(variant: Variant, g: Option<PopulationGraph>, count: u64, l: &NkLandscape, seed: u64) -> EaState {
    let mut r = stream(seed, Stream::Init, 0);
    let pop = (0..count)
        .map(|i| {
            let genome = Genome::random(l.n(), &mut r);
            Individual {
                id: NodeId(i),
                objective: l.evaluate(&genome).unwrap(),
                genome,
                birth_generation: 0,
            }
        })
        .collect();
    EaState::from_parts(variant, pop, g).unwrap()
}

#[test]
fn init_builds_rings_and_is_deterministic() {
    let l = NkLandscape::generate(30, 4, 1).unwrap();
    let cellular = EaConfig::new(Variant::Cellular, FitnessMode::Epistatic, 100, 30, 4);
    let s = EaState::init(&cellular, &l).unwrap();
    let g = s.graph().unwrap();
    assert_eq!(g.node_count(), 100);
    assert!(g.nodes().all(|n| g.degree(n).unwrap() == 2));
    assert!(g.has_edge(NodeId(0), NodeId(1)) && g.has_edge(NodeId(99), NodeId(0)));

    let panmictic = EaConfig::new(Variant::Panmictic, FitnessMode::Epistatic, 50, 30, 4);
    let p = EaState::init(&panmictic, &l).unwrap();
    assert!(p.graph().is_none());
    assert_eq!(p.len(), 50);

    let again = EaState::init(&panmictic, &l).unwrap();
    let genomes = |s: &EaState| s.individuals().map(|i| i.genome.clone()).collect::<Vec<_>>();
    assert_eq!(genomes(&p), genomes(&again));
    assert!(p.individuals().all(|i| i.objective == l.evaluate(&i.genome).unwrap()));

    let wrong = NkLandscape::generate(20, 4, 1).unwrap();
    assert!(EaState::init(&panmictic, &wrong).is_err());
}

#[test]
fn epistatic_fitness_examples() {
    // node 0 beats two of its three neighbors
    let s = star(&[0.5, 0.9, 0.1, 0.2]);
    assert!((s.epistatic_fitness(NodeId(0)).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    // best in neighborhood
    let s = star(&[0.95, 0.9, 0.1, 0.2, 0.3]);
    assert_eq!(s.epistatic_fitness(NodeId(0)).unwrap(), 1.0);
    // k=4 and worse than every neighbor
    let s = star(&[0.05, 0.9, 0.1, 0.2, 0.3]);
    assert_eq!(s.epistatic_fitness(NodeId(0)).unwrap(), 0.0);
    // a leaf only sees the hub
    assert_eq!(s.epistatic_fitness(NodeId(1)).unwrap(), 1.0);
    // equal objectives count against the rank
    let s = star(&[0.5, 0.5, 0.1]);
    assert_eq!(s.epistatic_fitness(NodeId(0)).unwrap(), 0.5);
    assert_eq!(s.epistatic_fitness(NodeId(1)).unwrap(), 0.0);

    let lonely = EaState::from_parts(Variant::Sotea, vec![ind(0, 0.1), ind(1, 0.2)], Some(graph(2, &[]))).unwrap();
    assert_eq!(lonely.epistatic_fitness(NodeId(0)).unwrap(), 1.0);
    assert_eq!(lonely.effective_fitness(NodeId(0), FitnessMode::Epistatic).unwrap(), 1.0);
    assert_eq!(lonely.effective_fitness(NodeId(0), FitnessMode::Raw).unwrap(), 0.1);
    assert!(lonely.epistatic_fitness(NodeId(7)).is_err());
}

#[test]
fn panmictic_epistatic_order_matches_objective_order() {
    let mut r = rng(3);
    for trial in 0..50 {
        let m = 3 + trial % 20;
        // coarse objectives so ties are common
        let pop: Vec<Individual> = (0..m as u64)
            .map(|i| ind(i, (rand::Rng::gen_range(&mut r, 0..6) as f64) / 5.0))
            .collect();
        let s = EaState::from_parts(Variant::Panmictic, pop.clone(), None).unwrap();
        for a in &pop {
            for b in &pop {
                let ea = s.epistatic_fitness(a.id).unwrap();
                let eb = s.epistatic_fitness(b.id).unwrap();
                assert_eq!(ea.partial_cmp(&eb), a.objective.partial_cmp(&b.objective));
            }
        }
    }
}

#[test]
fn epistatic_fitness_is_rank_stable() {
    let mut r = rng(8);
    for _ in 0..200 {
        let objs: Vec<f64> = (0..6).map(|_| rand::Rng::gen::<f64>(&mut r)).collect();
        let base = star(&objs);
        let before = base.epistatic_fitness(NodeId(0)).unwrap();
        // move neighbor 3 without crossing the hub's objective
        let mut moved = objs.clone();
        moved[3] = if objs[3] < objs[0] { objs[0] * rand::Rng::gen::<f64>(&mut r) } else { objs[0] + (1.0 - objs[0]) * rand::Rng::gen::<f64>(&mut r) };
        if moved[3] == objs[0] {
            continue;
        }
        let after = star(&moved).epistatic_fitness(NodeId(0)).unwrap();
        assert_eq!(before, after);
        assert!((0.0..=1.0).contains(&after));
    }
}

#[test]
fn sotea_reproduction_limits() {
    let (mut c, l) = small_config(Variant::Sotea);
    // parent 0 has three links
    let g = graph(4, &[(0, 1), (0, 2), (0, 3)]);
    let base = evaluated_state(Variant::Sotea, Some(g), 4, &l, 2);

    c.p_add = 0.0;
    c.p_remove = 0.0;
    let mut s = base.clone();
    let child = s.reproduce_sotea(NodeId(0), &c, &l, &mut rng(1)).unwrap();
    let g = s.graph().unwrap();
    assert_eq!(g.degree(child).unwrap(), 1);
    assert_eq!(g.degree(NodeId(0)).unwrap(), 4);

    c.p_add = 1.0;
    c.p_remove = 1.0;
    let mut s = base.clone();
    let child = s.reproduce_sotea(NodeId(0), &c, &l, &mut rng(1)).unwrap();
    let g = s.graph().unwrap();
    assert_eq!(g.degree(child).unwrap(), 4);
    assert_eq!(g.neighbors(NodeId(0)).unwrap().iter().copied().collect::<Vec<_>>(), vec![child]);
    assert_eq!(s.individual(child).unwrap().objective, l.evaluate(&s.individual(child).unwrap().genome).unwrap());
    s.audit().unwrap();
}

#[test]
fn sotea_offspring_degree_expectation() {
    // E[offspring degree] = 1 + p_add·d; binomial SE over 1e5 trials with
    // d = 5 is about 0.002.
    let (c, l) = small_config(Variant::Sotea);
    let d = 5;
    let edges: Vec<_> = (1..=d).map(|i| (0, i)).collect();
    let base = evaluated_state(Variant::Sotea, Some(graph(d + 1, &edges)), d + 1, &l, 4);
    let mut r = rng(99);
    let trials = 100_000;
    let mut total = 0usize;
    let mut parent_total = 0usize;
    for _ in 0..trials {
        let mut s = base.clone();
        let child = s.reproduce_sotea(NodeId(0), &c, &l, &mut r).unwrap();
        total += s.graph().unwrap().degree(child).unwrap();
        parent_total += s.graph().unwrap().degree(NodeId(0)).unwrap();
    }
    let mean = total as f64 / trials as f64;
    assert!((mean - (1.0 + 0.1 * d as f64)).abs() < 0.01, "mean {mean}");
    // parent keeps d + 1 - p_add·p_remove·d links on average
    let parent_mean = parent_total as f64 / trials as f64;
    assert!((parent_mean - (d as f64 + 1.0 - 0.01 * d as f64)).abs() < 0.01, "parent mean {parent_mean}");
}

#[test]
fn cellular_reproduction_keeps_the_ring() {
    let (c, l) = small_config(Variant::Cellular);
    for parent in 0..5 {
        let mut s = evaluated_state(Variant::Cellular, Some(PopulationGraph::new_ring(5).unwrap()), 5, &l, 1);
        let child = s.reproduce_cellular(NodeId(parent), &c, &l, &mut rng(parent)).unwrap();
        let g = s.graph().unwrap();
        assert!(g.is_single_cycle());
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.degree(child).unwrap(), 2);
        assert!(g.has_edge(child, NodeId(parent)));
    }

    let m = 12;
    let mut s = evaluated_state(Variant::Cellular, Some(PopulationGraph::new_ring(m).unwrap()), m as u64, &l, 5);
    let mut r = rng(5);
    for i in 0..m as u64 {
        s.reproduce_cellular(NodeId(i), &c, &l, &mut r).unwrap();
        assert!(s.graph().unwrap().is_single_cycle());
    }

    let mut isolated = evaluated_state(Variant::Cellular, Some(graph(3, &[(1, 2)])), 3, &l, 1);
    assert!(isolated.reproduce_cellular(NodeId(0), &c, &l, &mut r).is_err());
    assert!(isolated.reproduce_cellular(NodeId(9), &c, &l, &mut r).is_err());
}

#[test]
fn panmictic_reproduction() {
    let (c, l) = small_config(Variant::Panmictic);
    let base = evaluated_state(Variant::Panmictic, None, 10, &l, 6);
    let mut r = rng(6);
    let mut s = base.clone();
    let child = s.reproduce_panmictic(NodeId(3), &c, &l, &mut r).unwrap();
    assert_eq!(s.len(), 11);
    let kid = s.individual(child).unwrap();
    assert_eq!(kid.objective, l.evaluate(&kid.genome).unwrap());
    assert!(s.reproduce_panmictic(NodeId(99), &c, &l, &mut r).is_err());

    // flips ~ Binomial(N, 1/N): mean 1
    let parent = base.individual(NodeId(3)).unwrap().genome.clone();
    let trials = 20_000;
    let mut flips = 0;
    for _ in 0..trials {
        let mut s = base.clone();
        let child = s.reproduce_panmictic(NodeId(3), &c, &l, &mut r).unwrap();
        flips += s.individual(child).unwrap().genome.hamming(&parent).unwrap();
    }
    let mean = flips as f64 / trials as f64;
    assert!((mean - 1.0).abs() < 0.03, "mean flips {mean}");
}

#[test]
fn structured_competition_examples() {
    // 0 (0.9) is linked to 1 (0.2) and 2 (0.5); 1 also links 3
    let g = graph(4, &[(0, 1), (0, 2), (1, 3)]);
    let pop = vec![ind(0, 0.9), ind(1, 0.2), ind(2, 0.5), ind(3, 0.6)];
    let mut s = EaState::from_parts(Variant::Sotea, pop, Some(g)).unwrap();
    let survivor = s.compete_structured(NodeId(0), FitnessMode::Raw, &mut rng(0)).unwrap();
    assert_eq!(survivor, NodeId(0));
    assert!(s.individual(NodeId(1)).is_err());
    let ns: Vec<u64> = s.graph().unwrap().neighbors(NodeId(0)).unwrap().iter().map(|n| n.0).collect();
    assert_eq!(ns, vec![2, 3]);
    s.audit().unwrap();

    // a selected individual worse than its worst neighbor dies
    let g = graph(3, &[(0, 1), (0, 2)]);
    let pop = vec![ind(0, 0.1), ind(1, 0.4), ind(2, 0.8)];
    let mut s = EaState::from_parts(Variant::Cellular, pop, Some(g)).unwrap();
    let survivor = s.compete_structured(NodeId(0), FitnessMode::Raw, &mut rng(0)).unwrap();
    assert_eq!(survivor, NodeId(1));
    assert!(s.individual(NodeId(0)).is_err());
    assert!(s.graph().unwrap().has_edge(NodeId(1), NodeId(2)));

    // isolated selection is a counted no-op
    let mut s = EaState::from_parts(Variant::Sotea, vec![ind(0, 0.1), ind(1, 0.2)], Some(graph(2, &[]))).unwrap();
    assert_eq!(s.compete_structured(NodeId(0), FitnessMode::Epistatic, &mut rng(0)).unwrap(), NodeId(0));
    assert_eq!((s.len(), s.isolated_selections()), (2, 1));
}

#[test]
fn structured_ties_pick_a_uniform_loser() {
    let mut losers = [0usize; 3];
    let mut r = rng(21);
    for _ in 0..3000 {
        let pop = vec![ind(0, 0.5), ind(1, 0.5), ind(2, 0.5)];
        let mut s = EaState::from_parts(Variant::Sotea, pop, Some(PopulationGraph::new_ring(3).unwrap())).unwrap();
        s.compete_structured(NodeId(0), FitnessMode::Epistatic, &mut r).unwrap();
        assert_eq!(s.len(), 2);
        s.audit().unwrap();
        let dead = (0..3).find(|&i| s.individual(NodeId(i)).is_err()).unwrap();
        losers[dead as usize] += 1;
    }
    // node 0 loses half the time, each neighbor a quarter
    assert!((losers[0] as f64 / 3000.0 - 0.5).abs() < 0.04, "{losers:?}");
    assert!((losers[1] as f64 / 3000.0 - 0.25).abs() < 0.04, "{losers:?}");
}

#[test]
fn panmictic_competition() {
    let mut s = EaState::from_parts(Variant::Panmictic, vec![ind(0, 0.3), ind(1, 0.7)], None).unwrap();
    assert_eq!(s.compete_panmictic(NodeId(0), FitnessMode::Raw, &mut rng(0)).unwrap(), NodeId(1));
    assert_eq!(s.len(), 1);
    assert!(s.compete_panmictic(NodeId(1), FitnessMode::Raw, &mut rng(0)).is_err());
}

#[test]
fn panmictic_tournament_death_rates() {
    // With distinct fitnesses and one event, the individual with j better
    // rivals dies with probability 2j / (M(M-1)).
    let m = 5;
    let objs = [0.1, 0.2, 0.3, 0.4, 0.5];
    let trials = 40_000;
    let mut deaths = [0usize; 5];
    let mut r = rng(77);
    for _ in 0..trials {
        let pop = objs.iter().enumerate().map(|(i, &o)| ind(i as u64, o)).collect();
        let mut s = EaState::from_parts(Variant::Panmictic, pop, None).unwrap();
        s.set_tracing(true);
        let pick = rand::Rng::gen_range(&mut r, 0..m);
        s.compete_panmictic(NodeId(pick as u64), FitnessMode::Epistatic, &mut r).unwrap();
        match s.trace()[0] {
            TraceEvent::Death { selected, opponent, loser, .. } => {
                assert_ne!(selected, opponent);
                deaths[loser.0 as usize] += 1;
            }
            _ => unreachable!(),
        }
    }
    for (i, &d) in deaths.iter().enumerate() {
        let better = (m - 1 - i) as f64;
        let expected = 2.0 * better / (m * (m - 1)) as f64;
        assert!((d as f64 / trials as f64 - expected).abs() < 0.01, "rank {i}: {deaths:?}");
    }
}

#[test]
fn generation_phases_resize_population() {
    for variant in Variant::ALL {
        let (c, l) = small_config(variant);
        let mut s = EaState::init(&c, &l).unwrap();
        s.set_tracing(true);
        s.run_generation(&c, &l).unwrap();
        let births = s.trace().iter().filter(|e| matches!(e, TraceEvent::Birth { .. })).count();
        let deaths = s.trace().iter().filter(|e| matches!(e, TraceEvent::Death { .. })).count();
        assert_eq!((births, deaths), (c.m, c.m));
        // parents are all generation-start individuals
        assert!(s.trace().iter().all(|e| match e {
            TraceEvent::Birth { parent, .. } => parent.0 < c.m as u64,
            _ => true,
        }));
        assert_eq!(s.len(), c.m);
        assert_eq!(s.generation(), 1);
        s.audit().unwrap();
    }
}

#[test]
fn structured_state_stays_consistent_event_by_event() {
    for variant in [Variant::Cellular, Variant::Sotea] {
        let (c, l) = small_config(variant);
        let mut s = EaState::init(&c, &l).unwrap();
        let mut r = rng(5);
        for round in 0..30 {
            let parents: Vec<NodeId> = s.individuals().map(|i| i.id).collect();
            for p in parents {
                s.reproduce(p, &c, &l, &mut r).unwrap();
                s.audit().unwrap();
            }
            while s.len() > c.m {
                let before = s.len();
                let ids: Vec<NodeId> = s.individuals().map(|i| i.id).collect();
                let id = ids[rand::Rng::gen_range(&mut r, 0..ids.len())];
                s.compete(id, c.fitness_mode, &mut r).unwrap();
                let dropped = before - s.len();
                assert!(dropped <= 1, "round {round}");
                s.audit().unwrap();
            }
        }
    }
}

#[test]
fn cellular_ring_survives_many_generations() {
    let mut c = EaConfig::new(Variant::Cellular, FitnessMode::Epistatic, 30, 20, 5);
    c.seed = 4;
    let l = NkLandscape::generate(20, 5, 4).unwrap();
    let mut s = EaState::init(&c, &l).unwrap();
    for _ in 0..100 {
        s.run_generation(&c, &l).unwrap();
        assert!(s.graph().unwrap().is_single_cycle());
        assert_eq!(s.len(), 30);
    }
}

#[test]
fn runs_are_deterministic_and_share_the_initial_population() {
    let mut c = EaConfig::new(Variant::Sotea, FitnessMode::Epistatic, 30, 20, 4);
    c.generations = 25;
    c.seed = 11;
    assert_eq!(run(&c).unwrap(), run(&c).unwrap());

    let mut zero = c.clone();
    zero.generations = 0;
    let r = run(&zero).unwrap();
    assert_eq!(r.rows.len(), 1);
    assert_eq!(r.rows[0].generation, 0);

    let l = NkLandscape::generate(20, 4, 11).unwrap();
    let mut cellular = c.clone();
    cellular.variant = Variant::Cellular;
    let (ra, sa) = run_on(&zero, &l).unwrap();
    let mut cz = cellular.clone();
    cz.generations = 0;
    let (rb, sb) = run_on(&cz, &l).unwrap();
    let genomes = |s: &EaState| s.individuals().map(|i| i.genome.clone()).collect::<Vec<_>>();
    assert_eq!(genomes(&sa), genomes(&sb));
    assert_eq!(ra.rows[0].best_objective, rb.rows[0].best_objective);
    assert_ne!(run(&c).unwrap(), run(&cellular).unwrap());
}

#[test]
fn panmictic_modes_eliminate_the_same_individuals() {
    let mut c = EaConfig::new(Variant::Panmictic, FitnessMode::Epistatic, 30, 20, 6);
    c.seed = 3;
    let l = NkLandscape::generate(20, 6, 3).unwrap();
    let mut raw = c.clone();
    raw.fitness_mode = FitnessMode::Raw;
    let mut a = EaState::init(&c, &l).unwrap();
    let mut b = EaState::init(&raw, &l).unwrap();
    a.set_tracing(true);
    b.set_tracing(true);
    for _ in 0..40 {
        a.run_generation(&c, &l).unwrap();
        b.run_generation(&raw, &l).unwrap();
    }
    let losers = |s: &EaState| {
        s.trace()
            .iter()
            .filter_map(|e| match e {
                TraceEvent::Death { loser, .. } => Some(*loser),
                _ => None,
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(losers(&a), losers(&b));
    assert_eq!(losers(&a).len(), 40 * 30);
}

#[test]
fn invalid_configs_are_rejected() {
    let l = NkLandscape::generate(10, 2, 0).unwrap();
    let mut c = EaConfig::new(Variant::Sotea, FitnessMode::Raw, 2, 10, 2);
    assert!(EaState::init(&c, &l).is_err());
    c.m = 10;
    c.p_remove = -0.1;
    assert!(run(&c).is_err());
}
