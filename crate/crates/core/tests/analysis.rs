use sotea_core::analysis::{metrics_row, node_attributes_csv, pressure_csv, selection_pressure_edges};
use sotea_core::engine::{EaConfig, EaState, FitnessMode, Individual, Variant};
use sotea_core::{Genome, NkLandscape, NodeId, PopulationGraph};

fn ind(id: u64, objective: f64) -> Individual {
    Individual {
        id: NodeId(id),
        genome: Genome::zeros(4),
        objective,
        birth_generation: id,
    }
}

fn state(objs: &[f64], edges: &[(u64, u64)]) -> EaState {
    let mut g = PopulationGraph::new();
    for i in 0..objs.len() as u64 {
        g.add_node(NodeId(i)).unwrap();
    }
    for &(a, b) in edges {
        g.add_edge(NodeId(a), NodeId(b)).unwrap();
    }
    let pop = objs.iter().enumerate().map(|(i, &o)| ind(i as u64, o)).collect();
    EaState::from_parts(Variant::Sotea, pop, Some(g)).unwrap()
}

fn targets(s: &EaState, mode: FitnessMode) -> Vec<(u64, u64)> {
    selection_pressure_edges(s, mode)
        .unwrap()
        .iter()
        .map(|e| (e.source.0, e.target.0))
        .collect()
}

#[test]
fn triangle_pressure_points_at_the_weakest() {
    let s = state(&[0.9, 0.5, 0.1], &[(0, 1), (1, 2), (2, 0)]);
    assert_eq!(targets(&s, FitnessMode::Raw), vec![(0, 2), (1, 2), (2, 1)]);
}

#[test]
fn isolated_nodes_emit_nothing() {
    let s = state(&[0.9, 0.5, 0.1], &[(0, 1)]);
    assert_eq!(targets(&s, FitnessMode::Raw), vec![(0, 1), (1, 0)]);
    let pan = EaState::from_parts(Variant::Panmictic, vec![ind(0, 0.1), ind(1, 0.2)], None).unwrap();
    assert!(selection_pressure_edges(&pan, FitnessMode::Raw).is_err());
}

#[test]
fn ties_go_to_the_lower_id() {
    let s = state(&[0.9, 0.3, 0.3], &[(0, 1), (0, 2)]);
    assert_eq!(targets(&s, FitnessMode::Raw)[0], (0, 1));
}

#[test]
fn epistatic_and_raw_pressure_can_disagree() {
    // Node 0 sees B (id 1, objective 0.5) and C (id 2, objective 0.6).
    // B is the best of its own neighborhood, C the worst of its own, so the
    // raw target is B while the epistatic target is C.
    let objs = [0.7, 0.5, 0.6, 0.1, 0.2, 0.8, 0.9];
    let edges = [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)];
    let s = state(&objs, &edges);
    let raw = selection_pressure_edges(&s, FitnessMode::Raw).unwrap();
    let epi = selection_pressure_edges(&s, FitnessMode::Epistatic).unwrap();
    assert_eq!(raw[0].target, NodeId(1));
    assert_eq!(epi[0].target, NodeId(2));
    assert_eq!(epi[0].target_fitness, 0.0);
    assert_eq!(raw.len(), 7);
    assert_eq!(epi.len(), 7);
}

#[test]
fn one_edge_per_non_isolated_node_on_real_states() {
    let mut c = EaConfig::new(Variant::Sotea, FitnessMode::Epistatic, 40, 20, 5);
    c.seed = 2;
    let l = NkLandscape::generate(20, 5, 2).unwrap();
    let mut s = EaState::init(&c, &l).unwrap();
    for _ in 0..30 {
        s.run_generation(&c, &l).unwrap();
    }
    let g = s.graph().unwrap();
    let active = g.nodes().filter(|&n| g.degree(n).unwrap() > 0).count();
    for mode in [FitnessMode::Raw, FitnessMode::Epistatic] {
        let edges = selection_pressure_edges(&s, mode).unwrap();
        assert_eq!(edges.len(), active);
        assert!(edges.iter().all(|e| g.has_edge(e.source, e.target)));
    }
    let row = metrics_row(&s, 0.2, true).unwrap();
    assert_eq!(row.generation, 30);
    assert!(row.diversity_full >= 0.0 && row.diversity_top20 >= 0.0);
    assert!(row.best_objective >= row.mean_objective);
    assert_eq!(row.degree_average, Some(2.0 * g.edge_count() as f64 / 40.0));
}

#[test]
fn csv_exports() {
    let s = state(&[0.9, 0.5, 0.1], &[(0, 1), (1, 2)]);
    assert_eq!(
        node_attributes_csv(&s).unwrap(),
        "id,degree,objective,epistatic_fitness,birth_generation\n0,1,0.9,1,0\n1,2,0.5,0.5,1\n2,1,0.1,0,2\n"
    );
    let edges = selection_pressure_edges(&s, FitnessMode::Raw).unwrap();
    assert_eq!(
        pressure_csv(&edges),
        "source,target,source_fitness,target_fitness\n0,1,0.9,0.5\n1,2,0.5,0.1\n2,1,0.1,0.5\n"
    );
}
