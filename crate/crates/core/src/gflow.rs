//! Generalised flow: verification, exhaustive YZ-plane search, the canonical
//! bipartite construction, and structural checks on found flows.
//!
//! A flow is a correction map `g: V∖O → P(V∖I)` with a strict partial order
//! on `V`. The order is the transitive closure of a precedence digraph; the
//! flow also carries a layering of `V` that every precedence edge respects.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

mod search;
mod sweep;

pub use search::{search_gflow_yz, search_gflow_yz_with_cap, DEFAULT_SEARCH_CAP};
pub use sweep::{theorem2_sweep, DiscrepancyCase, SweepReport, SweepTally};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Plane {
    XY,
    XZ,
    YZ,
}

/// Measurement plane for every non-output vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlaneAssignment(pub BTreeMap<String, Plane>);

impl PlaneAssignment {
    pub fn uniform(g: &Graph, plane: Plane) -> Self {
        Self(measured_vertices(g).into_iter().map(|v| (v, plane)).collect())
    }

    pub fn all_yz(g: &Graph) -> Self {
        Self::uniform(g, Plane::YZ)
    }

    pub fn get(&self, v: &str) -> Option<Plane> {
        self.0.get(v).copied()
    }
}

/// Labels of `V∖O` in vertex order.
pub fn measured_vertices(g: &Graph) -> Vec<String> {
    g.vertices().iter().filter(|v| !g.is_output(v)).cloned().collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GFlow {
    correction: BTreeMap<String, VertexSet>,
    precedence: BTreeSet<(String, String)>,
    layers: Vec<Vec<String>>,
}

impl GFlow {
    /// Order given by layers alone: `u < v` iff `u` sits in an earlier layer.
    pub fn from_layers(correction: BTreeMap<String, VertexSet>, layers: Vec<Vec<String>>) -> Self {
        let mut precedence = BTreeSet::new();
        for (i, early) in layers.iter().enumerate() {
            for late in &layers[i + 1..] {
                for u in early {
                    for v in late {
                        precedence.insert((u.clone(), v.clone()));
                    }
                }
            }
        }
        Self { correction, precedence, layers }
    }

    /// Explicit precedence digraph plus a layering that must respect it.
    pub fn new(
        correction: BTreeMap<String, VertexSet>,
        precedence: BTreeSet<(String, String)>,
        layers: Vec<Vec<String>>,
    ) -> Self {
        Self { correction, precedence, layers }
    }

    pub fn correction(&self, v: &str) -> Option<&VertexSet> {
        self.correction.get(v)
    }

    pub fn corrections(&self) -> &BTreeMap<String, VertexSet> {
        &self.correction
    }

    pub fn precedence(&self) -> &BTreeSet<(String, String)> {
        &self.precedence
    }

    pub fn layers(&self) -> &[Vec<String>] {
        &self.layers
    }

    /// Deterministic measurement order for `measured`: layer by layer,
    /// lexicographic by label inside a layer.
    pub fn linear_extension(&self, measured: &[String]) -> Vec<String> {
        self.layers
            .iter()
            .flat_map(|layer| {
                let mut l: Vec<String> = layer.iter().filter(|v| measured.contains(v)).cloned().collect();
                l.sort();
                l
            })
            .collect()
    }

    /// Every pair `(u, v)` with `u < v` in the transitive closure.
    pub fn closure(&self, g: &Graph) -> Result<BTreeSet<(String, String)>> {
        let order = self.order(g)?;
        let mut out = BTreeSet::new();
        for (a, later) in order.later.iter().enumerate() {
            for &b in later {
                out.insert((g.label(a).to_string(), g.label(b).to_string()));
            }
        }
        Ok(out)
    }

    /// Strict order closure over the graph's vertex indices. Fails on
    /// structural problems (unknown vertices, broken layering, cycles).
    pub(crate) fn order(&self, g: &Graph) -> Result<Order> {
        let n = g.vertex_count();
        let mut layer_of = vec![usize::MAX; n];
        for (li, layer) in self.layers.iter().enumerate() {
            for v in layer {
                let i = g.index_of(v).map_err(|_| malformed(format!("layer names unknown vertex {v}")))?;
                if layer_of[i] != usize::MAX {
                    return Err(malformed(format!("vertex {v} appears in more than one layer")));
                }
                layer_of[i] = li;
            }
        }
        if let Some(i) = layer_of.iter().position(|&l| l == usize::MAX) {
            return Err(malformed(format!("vertex {} missing from layers", g.label(i))));
        }
        let mut succ = vec![BTreeSet::new(); n];
        for (u, v) in &self.precedence {
            let a = g.index_of(u).map_err(|_| malformed(format!("precedence names unknown vertex {u}")))?;
            let b = g.index_of(v).map_err(|_| malformed(format!("precedence names unknown vertex {v}")))?;
            if layer_of[a] >= layer_of[b] {
                return Err(malformed(format!("precedence {u} < {v} goes against the layering")));
            }
            succ[a].insert(b);
        }
        // forward edges between layers cannot close a cycle, so a closure by
        // reverse layer order is exact
        let mut by_layer: Vec<usize> = (0..n).collect();
        by_layer.sort_by_key(|&i| std::cmp::Reverse(layer_of[i]));
        let mut later = vec![BTreeSet::new(); n];
        for &a in &by_layer {
            let mut reach = BTreeSet::new();
            for &b in &succ[a] {
                reach.insert(b);
                reach.extend(later[b].iter().copied());
            }
            later[a] = reach;
        }
        Ok(Order { later })
    }

    fn check_shape(&self, g: &Graph) -> Result<()> {
        let measured: BTreeSet<String> = measured_vertices(g).into_iter().collect();
        let domain: BTreeSet<String> = self.correction.keys().cloned().collect();
        if domain != measured {
            return Err(malformed(format!("correction map domain {domain:?} differs from V∖O {measured:?}")));
        }
        for (v, set) in &self.correction {
            if let Some(bad) = set.iter().find(|u| !g.contains(u)) {
                return Err(malformed(format!("g({v}) names unknown vertex {bad}")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self, planes: &PlaneAssignment) -> FlowJson {
        FlowJson {
            g: self.correction.clone(),
            layers: self.layers.clone(),
            planes: Some(planes.clone()),
            precedence: Some(self.precedence.iter().map(|(u, v)| [u.clone(), v.clone()]).collect()),
        }
    }
}

fn malformed(msg: String) -> Error {
    Error::MalformedFlow(msg)
}

pub(crate) struct Order {
    later: Vec<BTreeSet<usize>>,
}

impl Order {
    pub(crate) fn precedes(&self, a: usize, b: usize) -> bool {
        self.later[a].contains(&b)
    }
}

/// `{"g":{"2":["2"],…}, "layers":[["2","4","6"],["1","3","5"]], "planes":{"2":"YZ",…}}`
/// with optional explicit `"precedence":[[u,v],…]`. Without precedence the
/// order is the layer order; without planes every vertex is YZ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowJson {
    pub g: BTreeMap<String, VertexSet>,
    pub layers: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planes: Option<PlaneAssignment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precedence: Option<Vec<[String; 2]>>,
}

impl FlowJson {
    pub fn into_flow(self, g: &Graph) -> (GFlow, PlaneAssignment) {
        let planes = self.planes.unwrap_or_else(|| PlaneAssignment::all_yz(g));
        let flow = match self.precedence {
            Some(p) => GFlow::new(self.g, p.into_iter().map(|[u, v]| (u, v)).collect(), self.layers),
            None => GFlow::from_layers(self.g, self.layers),
        };
        (flow, planes)
    }
}

/// The gflow conditions; `Codomain` is `g(v) ⊆ V∖I`, the others are
/// numbered 1 to 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    Codomain,
    CorrectionInFuture,
    OddInFuture,
    PlaneXY,
    PlaneXZ,
    PlaneYZ,
}

impl Condition {
    pub fn index(self) -> u8 {
        match self {
            Condition::Codomain => 0,
            Condition::CorrectionInFuture => 1,
            Condition::OddInFuture => 2,
            Condition::PlaneXY => 3,
            Condition::PlaneXZ => 4,
            Condition::PlaneYZ => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub vertex: String,
    pub condition: Condition,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertex {}: condition {} ({})", self.vertex, self.condition.index(), self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub valid: bool,
    pub violation: Option<Violation>,
}

/// Checks every condition of the definition for each `v ∈ V∖O`, in vertex
/// order, and reports the first failure. Structural defects are errors.
pub fn verify_gflow(g: &Graph, planes: &PlaneAssignment, flow: &GFlow) -> Result<Verdict> {
    flow.check_shape(g)?;
    let measured: BTreeSet<String> = measured_vertices(g).into_iter().collect();
    let plane_domain: BTreeSet<String> = planes.0.keys().cloned().collect();
    if plane_domain != measured {
        return Err(malformed(format!("plane assignment domain {plane_domain:?} differs from V∖O")));
    }
    let order = flow.order(g)?;
    let fail = |v: &str, condition, detail: String| {
        Ok(Verdict { valid: false, violation: Some(Violation { vertex: v.to_string(), condition, detail }) })
    };
    for vi in (0..g.vertex_count()).filter(|i| !g.output_indices().contains(i)) {
        let v = g.label(vi);
        let gv = &flow.correction[v];
        let gv_idx: BTreeSet<usize> = gv.iter().map(|u| g.index_of(u).expect("checked")).collect();
        if let Some(&u) = gv_idx.iter().find(|u| g.input_indices().contains(u)) {
            return fail(v, Condition::Codomain, format!("g({v}) contains input {}", g.label(u)));
        }
        if let Some(&u) = gv_idx.iter().find(|&&u| u != vi && !order.precedes(vi, u)) {
            return fail(
                v,
                Condition::CorrectionInFuture,
                format!("{} ∈ g({v}) but not {v} < {}", g.label(u), g.label(u)),
            );
        }
        let odd = g.odd_indices(&gv_idx);
        if let Some(&u) = odd.iter().find(|&&u| u != vi && !order.precedes(vi, u)) {
            return fail(
                v,
                Condition::OddInFuture,
                format!("{} ∈ Odd(g({v})) but not {v} < {}", g.label(u), g.label(u)),
            );
        }
        let in_g = gv_idx.contains(&vi);
        let in_odd = odd.contains(&vi);
        let plane = planes.get(v).expect("domain checked");
        let (ok, cond) = match plane {
            Plane::XY => (!in_g && in_odd, Condition::PlaneXY),
            Plane::XZ => (in_g && in_odd, Condition::PlaneXZ),
            Plane::YZ => (in_g && !in_odd, Condition::PlaneYZ),
        };
        if !ok {
            return fail(v, cond, format!("{plane:?} plane: {v} ∈ g({v}) is {in_g}, {v} ∈ Odd(g({v})) is {in_odd}"));
        }
    }
    Ok(Verdict { valid: true, violation: None })
}

/// `g(v) = {v}` for every `v ∉ I`, with all of `V∖I` in one layer preceding
/// `I`. Requires `O = I` and the graph bipartite with `I` as one side.
pub fn canonical_yz_gflow(g: &Graph) -> Result<GFlow> {
    if g.inputs() != g.outputs() {
        return Err(Error::InvalidFlow("canonical flow requires O = I".into()));
    }
    if !g.bipartition_check(&g.inputs())? {
        return Err(Error::NotBipartite);
    }
    let measured = measured_vertices(g);
    let correction = measured.iter().map(|v| (v.clone(), [v.as_str()].into_iter().collect())).collect();
    let mut layers = Vec::new();
    if !measured.is_empty() {
        layers.push(measured);
    }
    let inputs = g.input_labels();
    if !inputs.is_empty() {
        layers.push(inputs);
    }
    Ok(GFlow::from_layers(correction, layers))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    /// Maximal measured vertices under the order restricted to `V∖I`.
    pub maximal: Vec<String>,
    /// Every maximal measured vertex has `g(v) = {v}`.
    pub maximal_self_corrected: bool,
    /// No edge joins two members of `⋃ g(v)`.
    pub corrections_independent: bool,
    pub checked_pairs: usize,
    pub failures: Vec<String>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.maximal_self_corrected && self.corrections_independent
    }
}

/// Structural consequences of a valid YZ flow with `I = O`: maximal measured
/// vertices correct only themselves, and correction sets span no edges.
pub fn lemma_properties(flow: &GFlow, g: &Graph) -> Result<LemmaReport> {
    flow.check_shape(g)?;
    let order = flow.order(g)?;
    let measured: Vec<usize> = (0..g.vertex_count()).filter(|i| !g.input_indices().contains(i)).collect();
    let mut report = LemmaReport { maximal_self_corrected: true, corrections_independent: true, ..Default::default() };
    for &v in &measured {
        let label = g.label(v);
        if measured.iter().any(|&u| order.precedes(v, u)) {
            continue;
        }
        report.maximal.push(label.to_string());
        let Some(gv) = flow.correction(label) else { continue };
        if gv.len() != 1 || !gv.contains(label) {
            report.maximal_self_corrected = false;
            report.failures.push(format!("maximal vertex {label} has g = {:?}", gv.iter().collect::<Vec<_>>()));
        }
    }
    let sets: Vec<BTreeSet<usize>> = measured
        .iter()
        .filter_map(|&v| flow.correction(g.label(v)))
        .map(|s| s.iter().filter_map(|u| g.index_of(u).ok()).collect())
        .collect();
    for a in &sets {
        for b in &sets {
            for &w in a {
                for &x in b {
                    report.checked_pairs += 1;
                    if g.adjacent(w, x) {
                        report.corrections_independent = false;
                        let msg = format!("edge {} - {} inside correction sets", g.label(w), g.label(x));
                        if !report.failures.contains(&msg) {
                            report.failures.push(msg);
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
