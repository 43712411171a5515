//! Browser demo. Each export takes plain strings or numbers and returns a
//! JSON string; the work happens in the `demo_*` functions so they can be
//! tested natively.

use std::collections::BTreeMap;

use paritymbqc::gflow::{search_gflow_yz, verify_gflow, PlaneAssignment};
use paritymbqc::graph::Graph;
use paritymbqc::layout::ParityLayout;
use paritymbqc::parity::{DecodeSet, LayerParams};
use paritymbqc::pauli::{graph_generators, groups_equal, parity_generators};
use paritymbqc::program::{compare, Branches, InputSpec, ParityProgram};
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Largest layout the page offers; 4 data qubits is 10 physical qubits.
pub const MAX_N: usize = 4;

#[wasm_bindgen]
pub fn layout_view(n: usize) -> Result<String, JsError> {
    demo_layout(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn compare_engines(n: usize, angles_json: &str, seed: u64) -> Result<String, JsError> {
    demo_compare(n, angles_json, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn check_gflow(edges: &str, inputs: &str) -> Result<String, JsError> {
    demo_gflow(edges, inputs).map_err(|e| JsError::new(&e))
}

fn layout(n: usize) -> Result<ParityLayout, String> {
    if n > MAX_N {
        return Err(format!("n = {n} is above the demo limit of {MAX_N}"));
    }
    ParityLayout::all_pairs(n).map_err(|e| e.to_string())
}

/// Induced graph as SVG plus both generator lists.
pub fn demo_layout(n: usize) -> Result<String, String> {
    let l = layout(n)?;
    let parity = parity_generators(&l);
    let hadamard = l.parity_labels().into_iter().collect();
    let graph = graph_generators(&l.induced_graph()).hadamard_conjugate(&hadamard).map_err(|e| e.to_string())?;
    let equal = groups_equal(&parity, &graph).map_err(|e| e.to_string())?;
    Ok(json!({
        "svg": svg(&l),
        "parity_generators": parity.rendered(),
        "graph_generators": graph.rendered(),
        "equal": equal,
    })
    .to_string())
}

fn svg(l: &ParityLayout) -> String {
    let (w, top, bottom) = (520.0, 40.0, 160.0);
    let x = |i: usize, count: usize| w * (i as f64 + 0.5) / count as f64;
    let data = l.data_qubits();
    let parity = l.parity_qubits();
    let mut pos = BTreeMap::new();
    for (i, d) in data.iter().enumerate() {
        pos.insert(d.as_str(), (x(i, data.len()), top));
    }
    for (i, p) in parity.iter().enumerate() {
        pos.insert(p.label.as_str(), (x(i, parity.len()), bottom));
    }
    let mut s = format!(r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} 200" width="{w}" height="200">"#);
    for p in parity {
        let (px, py) = pos[p.label.as_str()];
        for d in p.set.iter() {
            let (dx, dy) = pos[d.as_str()];
            s += &format!(r##"<line x1="{dx}" y1="{dy}" x2="{px}" y2="{py}" stroke="#888"/>"##);
        }
    }
    for d in data {
        let (cx, cy) = pos[d.as_str()];
        s += &format!(
            r##"<rect x="{}" y="{}" width="28" height="28" fill="#dde8f5" stroke="#246"/><text x="{cx}" y="{}" text-anchor="middle">{d}</text>"##,
            cx - 14.0,
            cy - 14.0,
            cy + 5.0
        );
    }
    for p in parity {
        let (cx, cy) = pos[p.label.as_str()];
        s += &format!(
            r##"<circle cx="{cx}" cy="{cy}" r="18" fill="#f5e6d3" stroke="#642"/><text x="{cx}" y="{}" text-anchor="middle" font-size="12">{}</text>"##,
            cy + 4.0,
            p.label
        );
    }
    s + "</svg>"
}

/// One layer with `{"theta": {...}, "alpha": {...}}` angles on the
/// all-pairs layout, run on both engines over sampled branches.
pub fn demo_compare(n: usize, angles_json: &str, seed: u64) -> Result<String, String> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Angles {
        #[serde(default)]
        theta: BTreeMap<String, f64>,
        #[serde(default)]
        alpha: BTreeMap<String, f64>,
    }
    let angles: Angles = serde_json::from_str(angles_json).map_err(|e| e.to_string())?;
    let l = layout(n)?;
    let program = ParityProgram {
        layout: l.to_json(),
        layers: vec![LayerParams {
            theta: angles.theta,
            alpha: angles.alpha,
            phi: BTreeMap::new(),
            decode: DecodeSet::All,
        }],
        input: Some(InputSpec::Random { seed }),
    };
    let c = compare(&program, Branches::Sample { count: 8, seed }, 1e-10).map_err(|e| e.to_string())?;
    let probs = |a: &[[f64; 2]]| a.iter().map(|[re, im]| re * re + im * im).collect::<Vec<_>>();
    Ok(json!({
        "labels": c.parity.reference.labels,
        "parity_probabilities": probs(&c.parity.reference.amplitudes),
        "mbqc_probabilities": probs(&c.mbqc.reference.amplitudes),
        "distance": c.distance,
        "parity_branch_spread": c.parity.max_distance,
        "mbqc_branch_spread": c.mbqc.max_distance,
        "branches": c.parity.branches,
        "parity_measurements": c.parity.measurements,
        "mbqc_measurements": c.mbqc.measurements,
        "mbqc_record": c.mbqc.reference.records,
        "agree": c.agree,
    })
    .to_string())
}

/// `edges` like `"1-2 2-3"`, `inputs` like `"1 3"`; outputs equal inputs.
pub fn demo_gflow(edges: &str, inputs: &str) -> Result<String, String> {
    let sep = |c: char| c.is_whitespace() || c == ',';
    let mut pairs = Vec::new();
    for tok in edges.split(sep).filter(|t| !t.is_empty()) {
        let (u, v) = tok.split_once('-').ok_or_else(|| format!("edge {tok:?} is not of the form u-v"))?;
        pairs.push((u.trim().to_string(), v.trim().to_string()));
    }
    let io: Vec<&str> = inputs.split(sep).filter(|t| !t.is_empty()).collect();
    let mut vertices: Vec<String> = Vec::new();
    for v in pairs.iter().flat_map(|(u, v)| [u, v]).map(String::as_str).chain(io.iter().copied()) {
        if !vertices.iter().any(|x| x == v) {
            vertices.push(v.to_string());
        }
    }
    let mut g = Graph::new(vertices).map_err(|e| e.to_string())?;
    for (u, v) in &pairs {
        g.add_edge(u, v).map_err(|e| e.to_string())?;
    }
    let g = g.with_io(io.iter().copied(), io.iter().copied()).map_err(|e| e.to_string())?;
    let inputs = g.inputs();
    let found = search_gflow_yz(&g).map_err(|e| e.to_string())?;
    let planes = PlaneAssignment::all_yz(&g);
    let verified = match &found {
        Some(f) => Some(verify_gflow(&g, &planes, f).map_err(|e| e.to_string())?.valid),
        None => None,
    };
    Ok(json!({
        "vertices": g.vertices(),
        "found": found.is_some(),
        "verified": verified,
        "flow": found.map(|f| f.to_json(&planes)),
        "bipartite": g.bipartition_check(&inputs).map_err(|e| e.to_string())?,
        "resource_bipartite": g.resource_graph().bipartition_check(&inputs).map_err(|e| e.to_string())?,
    })
    .to_string())
}
