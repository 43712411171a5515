use paritymbqc::gflow::{
    canonical_yz_gflow, lemma_properties, search_gflow_yz, theorem2_sweep, verify_gflow, FlowJson, PlaneAssignment,
};
use paritymbqc::graph::{connected_graphs, Graph};
use paritymbqc::Error;

#[test]
fn sweep_to_six_vertices() {
    let r = theorem2_sweep(6).unwrap();
    let counts: Vec<usize> = r.per_n.values().map(|t| t.graphs).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);

    // every instance bipartite with I as a side has a witness
    assert!(r.literal_examples.iter().all(|c| !c.bipartite));
    assert_eq!(r.total.canonical_checked, r.total.bipartite);
    assert_eq!(r.total.canonical_failures, 0);

    // flow existence is exactly "V∖I independent": the literal test disagrees
    // only where I spans an edge
    assert!(r.discrepancies_explained());
    assert!(r.passed_on_resource_graph());
    assert_eq!(r.total.witnesses_verified, r.total.flows_found);
    assert_eq!(r.total.lemma_failures, 0);
    assert!(r.total.lemma1_samples >= 200);
    assert_eq!(r.total.lemma1_flows_found, 0);
}

#[test]
fn literal_mismatch_example_is_edge_inside_inputs() {
    let r = theorem2_sweep(2).unwrap();
    assert_eq!(r.total.literal_discrepancies, 1);
    let case = &r.literal_examples[0];
    assert_eq!(case.graph.input_labels(), vec!["1", "2"]);
    assert!(case.flow_found && !case.bipartite && case.resource_bipartite);
}

#[test]
fn witnesses_from_search_satisfy_the_lemmas() {
    for n in 1..=5 {
        for g in connected_graphs(n).unwrap() {
            for mask in 0u32..1 << n {
                let io: Vec<String> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| g.label(i).to_string()).collect();
                let h = g.clone().with_io(io.iter().map(String::as_str), io.iter().map(String::as_str)).unwrap();
                if let Some(f) = search_gflow_yz(&h).unwrap() {
                    let report = lemma_properties(&f, &h).unwrap();
                    assert!(report.holds(), "{:?}", report.failures);
                }
            }
        }
    }
}

#[test]
fn canonical_flow_has_single_measured_layer() {
    let g = Graph::cycle(8).with_io(["2", "4", "6", "8"], ["2", "4", "6", "8"]).unwrap();
    let f = canonical_yz_gflow(&g).unwrap();
    assert_eq!(f.layers().len(), 2);
    assert_eq!(f.layers()[0], vec!["1", "3", "5", "7"]);
    assert!(verify_gflow(&g, &PlaneAssignment::all_yz(&g), &f).unwrap().valid);
    assert!(f.closure(&g).unwrap().iter().all(|(u, v)| !g.is_input(u) && g.is_input(v)));
}

#[test]
fn canonical_requires_matching_io() {
    let g = Graph::path(3).with_io(["1"], ["3"]).unwrap();
    assert!(matches!(canonical_yz_gflow(&g), Err(Error::InvalidFlow(_))));
}

#[test]
fn witness_json_verifies_after_round_trip() {
    let g = Graph::cycle(6).with_io(["1", "3", "5"], ["1", "3", "5"]).unwrap();
    let f = search_gflow_yz(&g).unwrap().unwrap();
    let planes = PlaneAssignment::all_yz(&g);
    let text = serde_json::to_string(&f.to_json(&planes)).unwrap();
    let (back, p) = serde_json::from_str::<FlowJson>(&text).unwrap().into_flow(&g);
    assert!(verify_gflow(&g, &p, &back).unwrap().valid);
}

#[test]
fn self_corrections_on_odd_cycle_fail() {
    // hand-built g(v) = {v} on a 5-cycle with one input: Odd({v}) hits the
    // neighbours, forcing a cyclic order
    let g = Graph::cycle(5).with_io(["1"], ["1"]).unwrap();
    assert!(search_gflow_yz(&g).unwrap().is_none());
    let f = paritymbqc::gflow::GFlow::from_layers(
        ["2", "3", "4", "5"].iter().map(|v| (v.to_string(), [*v].into_iter().collect())).collect(),
        vec![vec!["2".into(), "4".into()], vec!["3".into(), "5".into()], vec!["1".into()]],
    );
    assert!(!verify_gflow(&g, &PlaneAssignment::all_yz(&g), &f).unwrap().valid);
    assert!(!lemma_properties(&f, &g).unwrap().corrections_independent);
}
