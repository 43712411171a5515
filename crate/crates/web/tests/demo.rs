use paritymbqc_web::{demo_compare, demo_gflow, demo_layout};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn layout_view_draws_every_qubit_and_edge() {
    let v = parse(&demo_layout(3).unwrap());
    let svg = v["svg"].as_str().unwrap();
    assert_eq!(svg.matches("<rect").count(), 3);
    assert_eq!(svg.matches("<circle").count(), 3);
    assert_eq!(svg.matches("<line").count(), 6);
    assert_eq!(v["equal"], true);
    assert_eq!(v["parity_generators"].as_array().unwrap().len(), 3);
}

#[test]
fn layout_view_rejects_large_and_empty() {
    assert!(demo_layout(5).is_err());
    assert!(demo_layout(0).is_err());
}

#[test]
fn engines_agree_from_slider_angles() {
    let v = parse(&demo_compare(3, r#"{"theta":{"(12)":0.7,"(13)":-1.2,"(23)":2.1},"alpha":{"2":0.4}}"#, 5).unwrap());
    assert_eq!(v["agree"], true);
    assert!(v["distance"].as_f64().unwrap() < 1e-10);
    let (p, m) = (v["parity_probabilities"].as_array().unwrap(), v["mbqc_probabilities"].as_array().unwrap());
    assert_eq!(p.len(), 8);
    let total: f64 = p.iter().map(|x| x.as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    for (a, b) in p.iter().zip(m) {
        assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-10);
    }
}

#[test]
fn unknown_angle_keys_are_errors() {
    assert!(demo_compare(2, r#"{"theta":{"(99)":1.0}}"#, 0).is_err());
    assert!(demo_compare(2, r#"{"beta":{}}"#, 0).is_err());
}

#[test]
fn gflow_check_on_typed_graphs() {
    let v = parse(&demo_gflow("1-2 2-3 3-4 4-1", "1 3").unwrap());
    assert_eq!(v["found"], true);
    assert_eq!(v["verified"], true);
    assert_eq!(v["bipartite"], true);

    let v = parse(&demo_gflow("1-2, 2-3, 1-3", "1").unwrap());
    assert_eq!(v["found"], false);
    assert_eq!(v["resource_bipartite"], false);

    // edge inside I: no bipartition with I as a side, yet a flow exists
    let v = parse(&demo_gflow("1-2 2-3 1-3", "1 2").unwrap());
    assert_eq!(v["found"], true);
    assert_eq!(v["bipartite"], false);
    assert_eq!(v["resource_bipartite"], true);
}

#[test]
fn gflow_check_reports_bad_input() {
    assert!(demo_gflow("1-2 23", "1").is_err());
    assert!(demo_gflow("1-1", "1").is_err());
}
