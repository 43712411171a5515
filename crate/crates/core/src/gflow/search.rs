//! Exhaustive YZ-plane flow search over bit masks.
//!
//! Every `v ∈ V∖O` gets the candidate sets `K ⊆ V∖I` with `v ∈ K` and
//! `v ∉ Odd(K)`. Picking `K` forces `v` before every vertex of
//! `(K ∪ Odd(K)) ∖ {v}`. Vertices are placed from the back: `v` becomes
//! placeable once some candidate's forced successors are all placed already
//! (outputs start placed). Placeability only grows with the placed set, so a
//! maximal unplaced vertex of any valid order is always placeable and the
//! sweep fails exactly when no acyclic choice of candidates exists.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

use super::GFlow;

pub const DEFAULT_SEARCH_CAP: usize = 8;

pub fn search_gflow_yz(g: &Graph) -> Result<Option<GFlow>> {
    search_gflow_yz_with_cap(g, DEFAULT_SEARCH_CAP)
}

pub fn search_gflow_yz_with_cap(g: &Graph, cap: usize) -> Result<Option<GFlow>> {
    let n = g.vertex_count();
    if n > cap || n > 32 {
        return Err(Error::SearchCapExceeded { n, cap });
    }
    let (inputs, outputs) = (g.input_indices(), g.output_indices());
    if inputs.len() != outputs.len() {
        return Err(Error::InputOutputSizeMismatch { inputs: inputs.len(), outputs: outputs.len() });
    }
    let adj = g.adjacency_masks();
    let mask_of = |s: &BTreeSet<usize>| s.iter().fold(0u64, |m, &i| m | 1 << i);
    let (in_mask, out_mask) = (mask_of(inputs), mask_of(outputs));
    let allowed = !in_mask & ((1u64 << n) - 1);
    let measured: Vec<usize> = (0..n).filter(|&v| out_mask >> v & 1 == 0).collect();

    let mut candidates = Vec::with_capacity(measured.len());
    for &v in &measured {
        let c = candidates_for(v, allowed, &adj);
        if c.is_empty() {
            return Ok(None);
        }
        candidates.push(c);
    }

    let mut placed = out_mask;
    let mut choice: Vec<Option<Candidate>> = vec![None; measured.len()];
    let mut remaining = measured.len();
    while remaining > 0 {
        let mut layer = Vec::new();
        for (k, &v) in measured.iter().enumerate() {
            if choice[k].is_some() {
                continue;
            }
            if let Some(c) = candidates[k].iter().find(|c| c.forced & !placed == 0) {
                layer.push((k, v, *c));
            }
        }
        if layer.is_empty() {
            return Ok(None);
        }
        for (k, v, c) in layer {
            choice[k] = Some(c);
            placed |= 1 << v;
            remaining -= 1;
        }
    }

    let chosen: Vec<(usize, Candidate)> =
        measured.iter().zip(choice).map(|(&v, c)| (v, c.expect("all placed"))).collect();
    Ok(Some(witness(g, &chosen, out_mask)))
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    set: u64,
    forced: u64,
}

/// Subsets of `allowed` satisfying the YZ condition at `v`, smallest first.
fn candidates_for(v: usize, allowed: u64, adj: &[u64]) -> Vec<Candidate> {
    let bit = 1u64 << v;
    if allowed & bit == 0 {
        return Vec::new();
    }
    let rest = allowed & !bit;
    let mut out = Vec::new();
    // enumerate all submasks of `rest`
    let mut sub = rest;
    loop {
        let set = sub | bit;
        let odd = odd_mask(set, adj);
        if odd & bit == 0 {
            out.push(Candidate { set, forced: (set | odd) & !bit });
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out.sort_by_key(|c| (c.set.count_ones(), c.set));
    out
}

pub(crate) fn odd_mask(set: u64, adj: &[u64]) -> u64 {
    adj.iter().enumerate().filter(|(_, &row)| (row & set).count_ones() % 2 == 1).fold(0, |m, (u, _)| m | 1 << u)
}

/// Precedence from the forced successors; measured vertices layered by
/// longest path, outputs in a final layer.
fn witness(g: &Graph, chosen: &[(usize, Candidate)], out_mask: u64) -> GFlow {
    let n = g.vertex_count();
    let bits = |m: u64| (0..n).filter(move |&i| m >> i & 1 == 1);
    let forced: BTreeMap<usize, u64> = chosen.iter().map(|&(v, c)| (v, c.forced)).collect();

    // depth(v) = 1 + max depth of measured successors; recursion terminates
    // because the forced digraph is acyclic by construction
    fn depth(v: usize, forced: &BTreeMap<usize, u64>, memo: &mut BTreeMap<usize, usize>, n: usize) -> usize {
        if let Some(&d) = memo.get(&v) {
            return d;
        }
        let mut d = 0;
        for u in (0..n).filter(|&u| forced[&v] >> u & 1 == 1) {
            if forced.contains_key(&u) {
                d = d.max(1 + depth(u, forced, memo, n));
            }
        }
        memo.insert(v, d);
        d
    }
    let mut memo = BTreeMap::new();
    let max_depth = forced.keys().map(|&v| depth(v, &forced, &mut memo, n)).max();

    let mut layers: Vec<Vec<String>> = Vec::new();
    if let Some(top) = max_depth {
        for d in (0..=top).rev() {
            layers.push(memo.iter().filter(|(_, &dv)| dv == d).map(|(&v, _)| g.label(v).to_string()).collect());
        }
    }
    let outputs: Vec<String> = bits(out_mask).map(|v| g.label(v).to_string()).collect();
    if !outputs.is_empty() {
        layers.push(outputs);
    }

    let mut precedence = BTreeSet::new();
    let mut correction = BTreeMap::new();
    for &(v, c) in chosen {
        for u in bits(c.forced) {
            precedence.insert((g.label(v).to_string(), g.label(u).to_string()));
        }
        let set: VertexSet = bits(c.set).map(|u| g.label(u).to_string()).collect();
        correction.insert(g.label(v).to_string(), set);
    }
    GFlow::new(correction, precedence, layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gflow::{verify_gflow, PlaneAssignment};
    use crate::graph::connected_graphs;

    /// Plain product enumeration over all candidate maps with a cycle check.
    fn naive_exists(g: &Graph) -> bool {
        let n = g.vertex_count();
        let adj = g.adjacency_masks();
        let in_mask = g.input_indices().iter().fold(0u64, |m, &i| m | 1 << i);
        let allowed = !in_mask & ((1u64 << n) - 1);
        let measured: Vec<usize> = (0..n).filter(|v| !g.output_indices().contains(v)).collect();
        let cands: Vec<Vec<Candidate>> = measured.iter().map(|&v| candidates_for(v, allowed, &adj)).collect();
        if cands.iter().any(Vec::is_empty) {
            return false;
        }
        let mut idx = vec![0usize; cands.len()];
        loop {
            let mut succ = vec![0u64; n];
            for (k, &v) in measured.iter().enumerate() {
                succ[v] = cands[k][idx[k]].forced;
            }
            if acyclic(&succ) {
                return true;
            }
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return false;
                }
                idx[k] += 1;
                if idx[k] < cands[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn acyclic(succ: &[u64]) -> bool {
        let n = succ.len();
        let mut left = (1u64 << n) - 1;
        loop {
            let sinks: u64 = (0..n).filter(|&v| left >> v & 1 == 1 && succ[v] & left == 0).fold(0, |m, v| m | 1 << v);
            if sinks == 0 {
                return left == 0;
            }
            left &= !sinks;
        }
    }

    fn with_io(g: Graph, i: &[&str], o: &[&str]) -> Graph {
        g.with_io(i.iter().copied(), o.iter().copied()).unwrap()
    }

    #[test]
    fn spec_examples() {
        let p3 = with_io(Graph::path(3), &["1", "3"], &["1", "3"]);
        let f = search_gflow_yz(&p3).unwrap().expect("flow");
        assert!(verify_gflow(&p3, &PlaneAssignment::all_yz(&p3), &f).unwrap().valid);
        assert!(search_gflow_yz(&with_io(Graph::path(3), &["1"], &["3"])).unwrap().is_none());
        assert!(search_gflow_yz(&with_io(Graph::complete(3), &["1"], &["1"])).unwrap().is_none());
    }

    #[test]
    fn triangle_with_two_inputs_has_a_flow() {
        // the 1-2 edge lies inside I and never enters a correction
        let k3 = with_io(Graph::complete(3), &["1", "2"], &["1", "2"]);
        let f = search_gflow_yz(&k3).unwrap().expect("flow");
        assert_eq!(f.correction("3").unwrap().iter().collect::<Vec<_>>(), vec!["3"]);
        assert!(verify_gflow(&k3, &PlaneAssignment::all_yz(&k3), &f).unwrap().valid);
        assert!(!k3.bipartition_check(&k3.inputs()).unwrap());
        assert!(k3.resource_graph().bipartition_check(&k3.inputs()).unwrap());
    }

    #[test]
    fn all_inputs_gives_empty_flow() {
        let k3 = with_io(Graph::complete(3), &["1", "2", "3"], &["1", "2", "3"]);
        let f = search_gflow_yz(&k3).unwrap().expect("flow");
        assert!(f.corrections().is_empty());
        assert_eq!(f.layers().len(), 1);
    }

    #[test]
    fn caps_and_sizes() {
        let odd = ["1", "3", "5", "7", "9"];
        let big = Graph::path(9).with_io(odd, odd).unwrap();
        assert_eq!(search_gflow_yz(&big).unwrap_err(), Error::SearchCapExceeded { n: 9, cap: 8 });
        assert!(search_gflow_yz_with_cap(&big, 9).unwrap().is_some());
        let lopsided = with_io(Graph::path(3), &["1", "2"], &["3"]);
        assert!(matches!(search_gflow_yz(&lopsided), Err(Error::InputOutputSizeMismatch { .. })));
    }

    #[test]
    fn agrees_with_naive_enumeration() {
        for n in 1..=5 {
            for g in connected_graphs(n).unwrap() {
                for mask in 0u32..1 << n {
                    let io: Vec<String> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| (i + 1).to_string()).collect();
                    let h = g.clone().with_io(io.iter().map(String::as_str), io.iter().map(String::as_str)).unwrap();
                    let found = search_gflow_yz(&h).unwrap();
                    assert_eq!(found.is_some(), naive_exists(&h), "{:?} I={io:?}", h.edges());
                    if let Some(f) = found {
                        assert!(verify_gflow(&h, &PlaneAssignment::all_yz(&h), &f).unwrap().valid);
                    }
                }
            }
        }
    }
}
