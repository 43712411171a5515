//! Exhaustive sweep comparing flow existence against the bipartition test.
//!
//! For every connected graph up to `max_n` vertices and every `I` with
//! `O = I` the search result is compared with `bipartition_check(G, I)`,
//! and also with the same test on the resource graph (edges inside `I`
//! removed). Each `I` is paired with a cyclic shift `O ≠ I` of equal size to
//! sample the `I = O` lemma.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_graphs, Graph, DEFAULT_ENUMERATION_CAP};

use super::{canonical_yz_gflow, lemma_properties, search_gflow_yz, verify_gflow, PlaneAssignment};

/// Stored discrepancy examples per kind; the tallies count all of them.
const EXAMPLE_LIMIT: usize = 16;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTally {
    pub graphs: usize,
    pub instances: usize,
    pub flows_found: usize,
    pub bipartite: usize,
    pub resource_bipartite: usize,
    pub literal_discrepancies: usize,
    pub resource_discrepancies: usize,
    /// Literal discrepancies where `I` spans an edge and the resource test agrees.
    pub explained_by_input_edges: usize,
    pub witnesses_verified: usize,
    pub unsound_witnesses: usize,
    pub lemma_checked_pairs: usize,
    pub lemma_failures: usize,
    pub canonical_checked: usize,
    pub canonical_failures: usize,
    pub lemma1_samples: usize,
    pub lemma1_flows_found: usize,
}

impl SweepTally {
    fn add(&mut self, o: &SweepTally) {
        self.graphs += o.graphs;
        self.instances += o.instances;
        self.flows_found += o.flows_found;
        self.bipartite += o.bipartite;
        self.resource_bipartite += o.resource_bipartite;
        self.literal_discrepancies += o.literal_discrepancies;
        self.resource_discrepancies += o.resource_discrepancies;
        self.explained_by_input_edges += o.explained_by_input_edges;
        self.witnesses_verified += o.witnesses_verified;
        self.unsound_witnesses += o.unsound_witnesses;
        self.lemma_checked_pairs += o.lemma_checked_pairs;
        self.lemma_failures += o.lemma_failures;
        self.canonical_checked += o.canonical_checked;
        self.canonical_failures += o.canonical_failures;
        self.lemma1_samples += o.lemma1_samples;
        self.lemma1_flows_found += o.lemma1_flows_found;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyCase {
    pub graph: Graph,
    pub flow_found: bool,
    pub bipartite: bool,
    pub resource_bipartite: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub max_n: usize,
    pub per_n: BTreeMap<usize, SweepTally>,
    pub total: SweepTally,
    pub literal_examples: Vec<DiscrepancyCase>,
    pub resource_examples: Vec<DiscrepancyCase>,
    pub other_failures: Vec<String>,
}

impl SweepReport {
    /// Flow existence matched `bipartition_check(G, I)` everywhere and every
    /// side check held.
    pub fn passed(&self) -> bool {
        self.total.literal_discrepancies == 0 && self.side_checks_passed()
    }

    /// Same, with the bipartition test taken on the resource graph.
    pub fn passed_on_resource_graph(&self) -> bool {
        self.total.resource_discrepancies == 0 && self.side_checks_passed()
    }

    /// Every literal discrepancy is an edge inside `I`.
    pub fn discrepancies_explained(&self) -> bool {
        self.total.explained_by_input_edges == self.total.literal_discrepancies
    }

    fn side_checks_passed(&self) -> bool {
        let t = &self.total;
        t.unsound_witnesses == 0
            && t.lemma_failures == 0
            && t.canonical_failures == 0
            && t.lemma1_flows_found == 0
            && self.other_failures.is_empty()
    }
}

#[derive(Default)]
struct Partial {
    tally: SweepTally,
    literal: Vec<DiscrepancyCase>,
    resource: Vec<DiscrepancyCase>,
    failures: Vec<String>,
}

impl Partial {
    fn merge(mut self, o: Partial) -> Partial {
        self.tally.add(&o.tally);
        self.literal.extend(o.literal);
        self.resource.extend(o.resource);
        self.failures.extend(o.failures);
        self.literal.truncate(EXAMPLE_LIMIT);
        self.resource.truncate(EXAMPLE_LIMIT);
        self
    }
}

pub fn theorem2_sweep(max_n: usize) -> Result<SweepReport> {
    if max_n == 0 || max_n > DEFAULT_ENUMERATION_CAP {
        return Err(Error::EnumerationCapExceeded { n: max_n, cap: DEFAULT_ENUMERATION_CAP });
    }
    let mut report = SweepReport {
        max_n,
        per_n: BTreeMap::new(),
        total: SweepTally::default(),
        literal_examples: Vec::new(),
        resource_examples: Vec::new(),
        other_failures: Vec::new(),
    };
    for n in 1..=max_n {
        let graphs: Vec<Graph> = connected_graphs(n)?.collect();
        let partial = sweep_graphs(&graphs)?;
        report.total.add(&partial.tally);
        report.per_n.insert(n, partial.tally);
        report.literal_examples.extend(partial.literal);
        report.resource_examples.extend(partial.resource);
        report.other_failures.extend(partial.failures);
    }
    report.literal_examples.truncate(EXAMPLE_LIMIT);
    report.resource_examples.truncate(EXAMPLE_LIMIT);
    Ok(report)
}

#[cfg(feature = "parallel")]
fn sweep_graphs(graphs: &[Graph]) -> Result<Partial> {
    use rayon::prelude::*;
    graphs.par_iter().map(sweep_graph).try_reduce(Partial::default, |a, b| Ok(a.merge(b)))
}

#[cfg(not(feature = "parallel"))]
fn sweep_graphs(graphs: &[Graph]) -> Result<Partial> {
    graphs.iter().map(sweep_graph).try_fold(Partial::default(), |a, b| Ok(a.merge(b?)))
}

fn sweep_graph(g: &Graph) -> Result<Partial> {
    let mut p = Partial::default();
    if !g.is_connected() {
        return Err(Error::InvalidProgram(format!("sweep graph {:?} is disconnected", g.edges())));
    }
    let n = g.vertex_count();
    p.tally.graphs = 1;
    for mask in 0u32..1 << n {
        let io: Vec<&str> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| g.label(i)).collect();
        let h = g.clone().with_io(io.iter().copied(), io.iter().copied())?;
        check_instance(&h, &mut p)?;

        let shifted: Vec<&str> = (0..n).filter(|i| mask >> ((i + n - 1) % n) & 1 == 1).map(|i| g.label(i)).collect();
        if shifted != io {
            let h = g.clone().with_io(io.iter().copied(), shifted.iter().copied())?;
            p.tally.lemma1_samples += 1;
            if search_gflow_yz(&h)?.is_some() {
                p.tally.lemma1_flows_found += 1;
                p.failures.push(format!("flow found with I = {io:?} != O = {shifted:?} on {:?}", g.edges()));
            }
        }
    }
    Ok(p)
}

fn check_instance(h: &Graph, p: &mut Partial) -> Result<()> {
    let t = &mut p.tally;
    t.instances += 1;
    let inputs = h.inputs();
    let bipartite = h.bipartition_check(&inputs)?;
    let resource_bipartite = h.resource_graph().bipartition_check(&inputs)?;
    let found = search_gflow_yz(h)?;
    t.bipartite += bipartite as usize;
    t.resource_bipartite += resource_bipartite as usize;
    t.flows_found += found.is_some() as usize;

    let case = || DiscrepancyCase { graph: h.clone(), flow_found: found.is_some(), bipartite, resource_bipartite };
    if found.is_some() != bipartite {
        t.literal_discrepancies += 1;
        let input_edge = h.edge_indices().any(|(a, b)| h.is_input(h.label(a)) && h.is_input(h.label(b)));
        if input_edge && found.is_some() == resource_bipartite {
            t.explained_by_input_edges += 1;
        }
        if p.literal.len() < EXAMPLE_LIMIT {
            p.literal.push(case());
        }
    }
    if found.is_some() != resource_bipartite {
        t.resource_discrepancies += 1;
        if p.resource.len() < EXAMPLE_LIMIT {
            p.resource.push(case());
        }
    }

    let planes = PlaneAssignment::all_yz(h);
    if let Some(flow) = &found {
        if verify_gflow(h, &planes, flow)?.valid {
            t.witnesses_verified += 1;
        } else {
            t.unsound_witnesses += 1;
            p.failures.push(format!("unsound witness on {:?} I = {:?}", h.edges(), h.input_labels()));
        }
        let lemmas = lemma_properties(flow, h)?;
        t.lemma_checked_pairs += lemmas.checked_pairs;
        if !lemmas.holds() {
            t.lemma_failures += 1;
            p.failures.extend(lemmas.failures);
        }
    }
    if bipartite {
        t.canonical_checked += 1;
        let flow = canonical_yz_gflow(h)?;
        let measured_layers = flow.layers().iter().filter(|l| l.iter().any(|v| !h.is_input(v))).count();
        if !verify_gflow(h, &planes, &flow)?.valid || measured_layers > 1 {
            t.canonical_failures += 1;
            p.failures.push(format!("canonical flow fails on {:?} I = {:?}", h.edges(), h.input_labels()));
        }
    }
    Ok(())
}
