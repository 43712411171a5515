//! Layered parity-encoded computation with measurement-based decoding.
//!
//! A layer rotates parity qubits about Z, decodes them by X measurements
//! with outcome-conditioned Z corrections on their data qubits, applies
//! `R_X(α_i) R_Z(φ_i)` to the data qubits and, unless it is the last layer,
//! re-encodes the decoded parity qubits from fresh `|0⟩` ancillas.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{Gate, ParityLayout};
use crate::sim::{Axis, MeasurementRecord, Outcome, OutcomeSource, Statevector};

/// Which parity qubits a layer measures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum DecodeSet {
    #[default]
    All,
    Subset(Vec<String>),
}

impl DecodeSet {
    /// Members in layout order.
    pub fn resolve(&self, layout: &ParityLayout) -> Result<Vec<String>> {
        match self {
            DecodeSet::All => Ok(layout.parity_labels()),
            DecodeSet::Subset(s) => {
                if let Some(bad) = s.iter().find(|p| layout.parity(p).is_none()) {
                    return Err(Error::InvalidProgram(format!("decode set names non-parity qubit {bad}")));
                }
                Ok(layout.parity_labels().into_iter().filter(|p| s.contains(p)).collect())
            }
        }
    }
}

impl Serialize for DecodeSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DecodeSet::All => s.serialize_str("all"),
            DecodeSet::Subset(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for DecodeSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            List(Vec<String>),
        }
        match Raw::deserialize(d)? {
            Raw::Word(w) if w == "all" => Ok(DecodeSet::All),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("decode must be \"all\" or a list, got {w:?}"))),
            Raw::List(v) => Ok(DecodeSet::Subset(v)),
        }
    }
}

/// Angles for one layer. Missing keys mean angle zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerParams {
    #[serde(default)]
    pub theta: BTreeMap<String, f64>,
    #[serde(default)]
    pub alpha: BTreeMap<String, f64>,
    #[serde(default)]
    pub phi: BTreeMap<String, f64>,
    #[serde(default)]
    pub decode: DecodeSet,
}

impl LayerParams {
    fn check(&self, layout: &ParityLayout, decoded: &[String]) -> Result<()> {
        for p in self.theta.keys() {
            if layout.parity(p).is_none() {
                return Err(Error::InvalidProgram(format!("theta names non-parity qubit {p}")));
            }
            if !decoded.contains(p) {
                return Err(Error::InvalidProgram(format!("theta given for undecoded parity qubit {p}")));
            }
        }
        for d in self.alpha.keys().chain(self.phi.keys()) {
            if !layout.data_qubits().contains(d) {
                return Err(Error::InvalidProgram(format!("data rotation names non-data qubit {d}")));
            }
        }
        // R_X does not commute with the CNOTs that feed undecoded parity qubits
        for (d, a) in &self.alpha {
            if *a == 0.0 {
                continue;
            }
            if let Some(p) = layout.parity_qubits().iter().find(|p| !decoded.contains(&p.label) && p.set.contains(d)) {
                return Err(Error::RotationOnEncodedQubit { data: d.clone(), parity: p.label.clone() });
            }
        }
        Ok(())
    }
}

fn check_data_register(layout: &ParityLayout, psi: &Statevector) -> Result<Statevector> {
    psi.reordered(layout.data_qubits()).map_err(|_| {
        Error::LabelMismatch(format!(
            "input over {:?}, layout data qubits are {:?}",
            psi.labels(),
            layout.data_qubits()
        ))
    })
}

/// `U_enc |0⟩^N |ψ⟩`, parity qubits appended in layout order.
pub fn encode_input(layout: &ParityLayout, psi: &Statevector) -> Result<Statevector> {
    let report = layout.validate_constraints();
    if !report.valid {
        return Err(Error::InvalidLayout(format!(
            "constraints do not realise the parity sets (basis state {}, qubit {})",
            report.counterexample.unwrap_or_default(),
            report.parity_qubit.unwrap_or_default()
        )));
    }
    let mut state = check_data_register(layout, psi)?;
    for p in layout.parity_qubits() {
        state = state.append_zero(&p.label)?;
    }
    state.apply_circuit(&layout.encoding_circuit())
}

/// X-measures each parity qubit in `subset` (taken in layout order); on
/// outcome `-1` applies `Z` to every member of its parity set, completing
/// `Z_p Z_{S(p)}`. Measured qubits are discarded.
pub fn mb_decode(
    state: &Statevector,
    layout: &ParityLayout,
    subset: &[String],
    outcomes: &mut dyn OutcomeSource,
) -> Result<(Statevector, MeasurementRecord)> {
    let mut record = MeasurementRecord::default();
    let mut state = state.clone();
    let ordered = DecodeSet::Subset(subset.to_vec()).resolve(layout)?;
    for label in &ordered {
        if !state.contains(label) {
            return Err(Error::UnknownQubit(label.clone()));
        }
        let p = layout.parity(label).expect("resolved against layout");
        state = state.measure(label, Axis::X, outcomes, &mut record)?;
        if record.0.last().map(|e| e.outcome) == Some(Outcome::Minus) {
            for d in &p.set {
                state.apply(&Gate::Z(d.clone()))?;
            }
        }
        state = state.discard_qubit(label)?;
    }
    Ok((state, record))
}

/// One layer on an encoded state. The last layer decodes every parity qubit
/// and returns the bare data register; earlier layers re-encode whatever they
/// decoded and return the full register in layout order.
pub fn run_layer(
    state: &Statevector,
    layout: &ParityLayout,
    params: &LayerParams,
    outcomes: &mut dyn OutcomeSource,
    last: bool,
) -> Result<(Statevector, MeasurementRecord)> {
    let decoded = if last { layout.parity_labels() } else { params.decode.resolve(layout)? };
    params.check(layout, &decoded)?;

    let mut state = state.clone();
    for p in &decoded {
        if let Some(&theta) = params.theta.get(p) {
            state.apply(&Gate::Rz(p.clone(), theta))?;
        }
    }
    let (mut state, record) = mb_decode(&state, layout, &decoded, outcomes)?;

    for d in layout.data_qubits() {
        if let Some(&phi) = params.phi.get(d) {
            state.apply(&Gate::Rz(d.clone(), phi))?;
        }
        if let Some(&alpha) = params.alpha.get(d) {
            state.apply(&Gate::Rx(d.clone(), alpha))?;
        }
    }

    if last {
        return Ok((state.reordered(layout.data_qubits())?, record));
    }
    for p in &decoded {
        let pq = layout.parity(p).expect("resolved against layout");
        state = state.append_zero(p)?;
        for d in &pq.set {
            state.apply(&Gate::Cnot(d.clone(), p.clone()))?;
        }
    }
    Ok((state.reordered(&layout.all_qubits())?, record))
}

/// Encodes `psi`, runs every layer and returns the decoded data register with
/// one measurement record per layer.
pub fn run_computation(
    layout: &ParityLayout,
    psi: &Statevector,
    layers: &[LayerParams],
    outcomes: &mut dyn OutcomeSource,
) -> Result<(Statevector, Vec<MeasurementRecord>)> {
    if layers.is_empty() {
        return Err(Error::NoLayers);
    }
    let mut state = encode_input(layout, psi)?;
    let mut records = Vec::with_capacity(layers.len());
    for (l, params) in layers.iter().enumerate() {
        let (next, record) = run_layer(&state, layout, params, outcomes, l + 1 == layers.len())?;
        state = next;
        records.push(record);
    }
    Ok((state, records))
}

/// Number of measurements `run_computation` performs for these layers.
pub fn measurement_count(layout: &ParityLayout, layers: &[LayerParams]) -> Result<usize> {
    let mut total = 0;
    for (l, params) in layers.iter().enumerate() {
        total +=
            if l + 1 == layers.len() { layout.parity_qubits().len() } else { params.decode.resolve(layout)?.len() };
    }
    Ok(total)
}

/// Decoding by running the constraint CNOTs backwards; every parity qubit
/// must come out as `|0⟩`.
pub fn unitary_decode(state: &Statevector, layout: &ParityLayout) -> Result<Statevector> {
    let mut state = state.clone();
    for (c, t) in layout.constraints().iter().rev() {
        state.apply(&Gate::Cnot(c.clone(), t.clone()))?;
    }
    for p in layout.parity_labels() {
        let p_one = state.probability(&p, Axis::Z, Outcome::Minus)?;
        if p_one > 1e-10 {
            return Err(Error::OutsideCodespace(p));
        }
        state = state.discard_qubit(&p)?;
    }
    state.reordered(layout.data_qubits())
}
