//! Program files for both engines, the translation from a parity program to
//! its MBQC counterpart, and outcome-branch enumeration.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gflow::{canonical_yz_gflow, measured_vertices, search_gflow_yz, FlowJson, GFlow};
use crate::graph::{Graph, GraphJson};
use crate::layout::{LayoutJson, ParityLayout};
use crate::mbqc::{run_repeated_mbqc, MbqcLayer};
use crate::parity::{measurement_count, run_computation, LayerParams};
use crate::sim::{distance_up_to_phase, MeasurementRecord, OutcomeSource, Prescribed, Sampled, Statevector};

/// Input register: explicit amplitudes (`[[re, im], …]`, qubit order of the
/// data register) or a seed for a random state. Absent means `|0…0⟩`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum InputSpec {
    Amplitudes(Vec<[f64; 2]>),
    Random { seed: u64 },
}

impl InputSpec {
    pub fn state(spec: Option<&InputSpec>, labels: Vec<String>) -> Result<Statevector> {
        match spec {
            None => Statevector::zero(labels),
            Some(InputSpec::Amplitudes(a)) => {
                let amps = a.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                Statevector::from_amplitudes(labels, amps)
            }
            Some(InputSpec::Random { seed }) => Statevector::random(labels, &mut ChaCha8Rng::seed_from_u64(*seed)),
        }
    }
}

/// `{"layout": …, "layers": [{"theta":…, "alpha":…, "phi":…, "decode":"all"}, …]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParityProgram {
    pub layout: LayoutJson,
    pub layers: Vec<LayerParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSpec>,
}

impl ParityProgram {
    pub fn layout(&self) -> Result<ParityLayout> {
        ParityLayout::try_from(self.layout.clone())
    }

    pub fn input_state(&self) -> Result<Statevector> {
        InputSpec::state(self.input.as_ref(), self.layout()?.data_qubits().to_vec())
    }

    pub fn measurement_count(&self) -> Result<usize> {
        measurement_count(&self.layout()?, &self.layers)
    }

    pub fn run(&self, outcomes: &mut dyn OutcomeSource) -> Result<(Statevector, Vec<MeasurementRecord>)> {
        run_computation(&self.layout()?, &self.input_state()?, &self.layers, outcomes)
    }

    /// Same computation on the induced graph: `θ_v = θ_p` for decoded `p`,
    /// identical data rotations, canonical flow. Parity qubits left encoded
    /// in a layer correspond to `θ_v = 0`.
    pub fn to_mbqc(&self) -> Result<MbqcProgram> {
        let layout = self.layout()?;
        let g = layout.induced_graph();
        let flow = canonical_yz_gflow(&g)?;
        let layers = self
            .layers
            .iter()
            .map(|l| MbqcLayer { theta: l.theta.clone(), alpha: l.alpha.clone(), phi: l.phi.clone() })
            .collect();
        Ok(MbqcProgram {
            graph: Some(g.to_json()),
            layout: None,
            layers,
            flow: Some(flow.to_json(&crate::gflow::PlaneAssignment::all_yz(&g))),
            input: self.input.clone(),
        })
    }
}

/// Either a graph or a layout (whose induced graph is used), YZ layers, an
/// optional flow witness (canonical or searched when absent) and an input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MbqcProgram {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<LayoutJson>,
    pub layers: Vec<MbqcLayer>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputSpec>,
}

impl MbqcProgram {
    pub fn graph(&self) -> Result<Graph> {
        match (&self.graph, &self.layout) {
            (Some(g), None) => Graph::try_from(g.clone()),
            (None, Some(l)) => Ok(ParityLayout::try_from(l.clone())?.induced_graph()),
            _ => Err(Error::InvalidProgram("exactly one of \"graph\" and \"layout\" is required".into())),
        }
    }

    pub fn flow(&self, g: &Graph) -> Result<GFlow> {
        match &self.flow {
            Some(f) => Ok(f.clone().into_flow(g).0),
            None => match canonical_yz_gflow(g) {
                Ok(f) => Ok(f),
                Err(_) => search_gflow_yz(g)?.ok_or_else(|| Error::InvalidFlow("graph has no YZ flow".into())),
            },
        }
    }

    pub fn input_state(&self, g: &Graph) -> Result<Statevector> {
        InputSpec::state(self.input.as_ref(), g.input_labels())
    }

    pub fn measurement_count(&self) -> Result<usize> {
        Ok(measured_vertices(&self.graph()?).len() * self.layers.len())
    }

    pub fn run(&self, outcomes: &mut dyn OutcomeSource) -> Result<(Statevector, Vec<MeasurementRecord>)> {
        let g = self.graph()?;
        let flow = self.flow(&g)?;
        run_repeated_mbqc(&g, &self.input_state(&g)?, &self.layers, &flow, outcomes)
    }
}

/// A program file of either kind; MBQC programs are recognised by a
/// `graph` or `flow` key, or by layers without `decode`.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyProgram {
    Parity(ParityProgram),
    Mbqc(MbqcProgram),
}

impl AnyProgram {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let is_mbqc = value.get("graph").is_some() || value.get("flow").is_some();
        if is_mbqc {
            return Ok(AnyProgram::Mbqc(serde_json::from_value(value)?));
        }
        match serde_json::from_value::<ParityProgram>(value.clone()) {
            Ok(p) => Ok(AnyProgram::Parity(p)),
            Err(e) => serde_json::from_value::<MbqcProgram>(value).map(AnyProgram::Mbqc).map_err(|_| e.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub labels: Vec<String>,
    pub amplitudes: Vec<[f64; 2]>,
    pub records: Vec<MeasurementRecord>,
}

impl RunResult {
    pub fn new(state: &Statevector, records: Vec<MeasurementRecord>) -> Self {
        Self { labels: state.labels().to_vec(), amplitudes: state.amplitude_dump(), records }
    }
}

/// How outcome branches are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branches {
    /// Every prescribed branch of the given number of measurements.
    All,
    /// `count` Born-sampled runs from consecutive seeds.
    Sample { count: usize, seed: u64 },
}

/// Largest branch count `Branches::All` will enumerate.
pub const MAX_ENUMERATED_MEASUREMENTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchSummary {
    pub measurements: usize,
    pub branches: usize,
    /// Largest distance of any branch output from the first one.
    pub max_distance: f64,
    pub reference: RunResult,
}

/// Runs `run` once per branch and compares every output with the first.
pub fn run_branches<F>(measurements: usize, mode: Branches, run: F) -> Result<BranchSummary>
where
    F: Fn(&mut dyn OutcomeSource) -> Result<(Statevector, Vec<MeasurementRecord>)> + Sync,
{
    let sources: Vec<Box<dyn OutcomeSource + Send>> = match mode {
        Branches::All => {
            if measurements > MAX_ENUMERATED_MEASUREMENTS {
                return Err(Error::InvalidProgram(format!(
                    "{measurements} measurements is too many to enumerate all branches"
                )));
            }
            (0..1u64 << measurements).map(|b| Box::new(Prescribed::branch(b, measurements)) as _).collect()
        }
        Branches::Sample { count, seed } => {
            (0..count.max(1) as u64).map(|k| Box::new(Sampled::seeded(seed.wrapping_add(k))) as _).collect()
        }
    };
    let outputs = map_sources(sources, &run)?;
    let (first, first_records) = outputs[0].clone();
    let mut max_distance: f64 = 0.0;
    for (s, _) in &outputs[1..] {
        max_distance = max_distance.max(distance_up_to_phase(&first, s)?);
    }
    Ok(BranchSummary {
        measurements,
        branches: outputs.len(),
        max_distance,
        reference: RunResult::new(&first, first_records),
    })
}

type Output = (Statevector, Vec<MeasurementRecord>);

#[cfg(feature = "parallel")]
fn map_sources<F>(sources: Vec<Box<dyn OutcomeSource + Send>>, run: &F) -> Result<Vec<Output>>
where
    F: Fn(&mut dyn OutcomeSource) -> Result<Output> + Sync,
{
    use rayon::prelude::*;
    sources.into_par_iter().map(|mut s| run(s.as_mut())).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_sources<F>(sources: Vec<Box<dyn OutcomeSource + Send>>, run: &F) -> Result<Vec<Output>>
where
    F: Fn(&mut dyn OutcomeSource) -> Result<Output> + Sync,
{
    sources.into_iter().map(|mut s| run(s.as_mut())).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub parity: BranchSummary,
    pub mbqc: BranchSummary,
    /// Distance between the two engines' reference outputs.
    pub distance: f64,
    pub tolerance: f64,
    pub agree: bool,
}

/// Runs a parity program and its MBQC translation and compares outputs
/// across branches.
pub fn compare(program: &ParityProgram, mode: Branches, tolerance: f64) -> Result<Comparison> {
    let mbqc = program.to_mbqc()?;
    let parity = run_branches(program.measurement_count()?, mode, |o| program.run(o))?;
    let m = run_branches(mbqc.measurement_count()?, mode, |o| mbqc.run(o))?;
    let a = Statevector::from_dump(parity.reference.labels.clone(), &parity.reference.amplitudes)?;
    let b = Statevector::from_dump(m.reference.labels.clone(), &m.reference.amplitudes)?;
    let distance = distance_up_to_phase(&a, &b)?;
    let agree = distance < tolerance && parity.max_distance < tolerance && m.max_distance < tolerance;
    Ok(Comparison { parity, mbqc: m, distance, tolerance, agree })
}
