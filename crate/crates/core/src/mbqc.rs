//! Graph states with input, YZ-plane measurement patterns driven by a flow,
//! and the layered execution that interleaves patterns with data rotations.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gflow::{measured_vertices, verify_gflow, GFlow, PlaneAssignment};
use crate::graph::Graph;
use crate::layout::{Circuit, Gate};
use crate::sim::{Axis, MeasurementRecord, Outcome, OutcomeSource, Statevector};

/// `ψ` on the inputs, `|+⟩` elsewhere, then `CZ` on every edge not inside
/// `I`. The register comes back in vertex order.
pub fn prepare_graph_state(g: &Graph, psi: &Statevector) -> Result<Statevector> {
    let inputs = g.input_labels();
    let given: BTreeSet<&String> = psi.labels().iter().collect();
    if given != inputs.iter().collect::<BTreeSet<_>>() {
        return Err(Error::LabelMismatch(format!("state on {:?}, graph inputs {:?}", psi.labels(), inputs)));
    }
    let mut state = psi.reordered(&inputs)?;
    for v in g.vertices().iter().filter(|v| !g.is_input(v)) {
        state = state.append_plus(v)?;
    }
    for (u, v) in g.edges() {
        if !(g.is_input(&u) && g.is_input(&v)) {
            state.apply(&Gate::Cz(u, v))?;
        }
    }
    state.reordered(g.vertices())
}

/// `⊗_{v∈V∖I} H_v`.
pub fn hadamard_layer(g: &Graph) -> Circuit {
    Circuit(g.vertices().iter().filter(|v| !g.is_input(v)).map(|v| Gate::H(v.clone())).collect())
}

/// Prepares the graph state with input and measures every `v ∈ V∖O` along
/// `(0, sin θ_v, cos θ_v)`. On outcome `-1` at `v` the rest of the stabiliser
/// `∏_{u∈g(v)} K_u` is applied: `X` on `g(v)∖{v}`, `Z` on `Odd(g(v))∖{v}`.
/// Missing angles are zero. `order` overrides the default measurement order
/// and must be a linear extension of the flow's order.
pub fn run_mbqc_yz(
    g: &Graph,
    psi: &Statevector,
    angles: &BTreeMap<String, f64>,
    flow: &GFlow,
    outcomes: &mut dyn OutcomeSource,
    order: Option<&[String]>,
) -> Result<(Statevector, MeasurementRecord)> {
    let measured = measured_vertices(g);
    if let Some(bad) = angles.keys().find(|v| !measured.contains(v)) {
        return Err(Error::InvalidProgram(format!("angle given for unmeasured or unknown vertex {bad}")));
    }
    let verdict = verify_gflow(g, &PlaneAssignment::all_yz(g), flow)?;
    if let Some(v) = verdict.violation {
        return Err(Error::InvalidFlow(v.to_string()));
    }
    let sequence = match order {
        Some(o) => check_order(g, flow, &measured, o)?,
        None => flow.linear_extension(&measured),
    };

    let mut state = prepare_graph_state(g, psi)?;
    let mut record = MeasurementRecord::default();
    for v in &sequence {
        let theta = angles.get(v).copied().unwrap_or(0.0);
        state = state.measure(v, Axis::yz(theta), outcomes, &mut record)?;
        if record.0.last().map(|e| e.outcome) == Some(Outcome::Minus) {
            let gv = flow.correction(v).expect("verified");
            for u in gv.iter().filter(|u| *u != v) {
                state.apply(&Gate::X(u.to_string()))?;
            }
            for w in g.odd_neighborhood(gv)?.iter().filter(|w| *w != v) {
                state.apply(&Gate::Z(w.to_string()))?;
            }
        }
        state = state.discard_qubit(v)?;
    }
    Ok((state.reordered(&g.output_labels())?, record))
}

fn check_order(g: &Graph, flow: &GFlow, measured: &[String], order: &[String]) -> Result<Vec<String>> {
    let same = order.len() == measured.len() && order.iter().collect::<BTreeSet<_>>() == measured.iter().collect();
    if !same {
        return Err(Error::InvalidProgram(format!("measurement order {order:?} is not a permutation of {measured:?}")));
    }
    let po = flow.order(g)?;
    for (i, a) in order.iter().enumerate() {
        for b in &order[i + 1..] {
            if po.precedes(g.index_of(b)?, g.index_of(a)?) {
                return Err(Error::InvalidProgram(format!("{b} must be measured before {a}")));
            }
        }
    }
    Ok(order.to_vec())
}

/// One round of the repeated computation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbqcLayer {
    #[serde(default)]
    pub theta: BTreeMap<String, f64>,
    #[serde(default)]
    pub alpha: BTreeMap<String, f64>,
    #[serde(default)]
    pub phi: BTreeMap<String, f64>,
}

/// Per layer: fresh graph state on the current data register, the YZ
/// pattern, then `R_Z(φ)` followed by `R_X(α)` on each output. Needs `I = O`.
pub fn run_repeated_mbqc(
    g: &Graph,
    psi: &Statevector,
    layers: &[MbqcLayer],
    flow: &GFlow,
    outcomes: &mut dyn OutcomeSource,
) -> Result<(Statevector, Vec<MeasurementRecord>)> {
    if layers.is_empty() {
        return Err(Error::NoLayers);
    }
    if g.inputs() != g.outputs() {
        return Err(Error::InvalidProgram("repeated execution needs I = O".into()));
    }
    let outputs = g.output_labels();
    for layer in layers {
        if let Some(bad) = layer.alpha.keys().chain(layer.phi.keys()).find(|q| !outputs.contains(q)) {
            return Err(Error::InvalidProgram(format!("data rotation on non-output vertex {bad}")));
        }
    }
    let mut state = psi.clone();
    let mut records = Vec::with_capacity(layers.len());
    for layer in layers {
        let (mut next, record) = run_mbqc_yz(g, &state, &layer.theta, flow, outcomes, None)?;
        for q in &outputs {
            if let Some(&phi) = layer.phi.get(q) {
                next.apply(&Gate::Rz(q.clone(), phi))?;
            }
            if let Some(&alpha) = layer.alpha.get(q) {
                next.apply(&Gate::Rx(q.clone(), alpha))?;
            }
        }
        state = next;
        records.push(record);
    }
    Ok((state, records))
}
