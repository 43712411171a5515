//! Enumeration of connected simple graphs up to isomorphism.
//!
//! Graphs on `n` vertices are grown from the representatives on `n - 1`
//! vertices by attaching one new vertex to a nonempty neighbour set. Every
//! connected graph has a non-cut vertex, so this reaches every isomorphism
//! class. Duplicates are removed with a canonical adjacency code.

use std::collections::BTreeSet;

use super::Graph;
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// One representative per isomorphism class of connected graphs on `n`
/// vertices, labelled `"1"..="n"`, in increasing canonical-code order.
pub fn connected_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    connected_graphs_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn connected_graphs_with_cap(n: usize, cap: usize) -> Result<impl Iterator<Item = Graph>> {
    if n == 0 || n > cap || n > MAX_ORDER {
        return Err(Error::EnumerationCapExceeded { n, cap: cap.min(MAX_ORDER) });
    }
    let mut level: BTreeSet<u64> = BTreeSet::from([0]);
    for order in 2..=n {
        let mut next = BTreeSet::new();
        for &code in &level {
            let adj = decode(code, order - 1);
            for nbrs in 1u32..(1 << (order - 1)) {
                let mut grown = adj.clone();
                grown.push(nbrs);
                for (i, row) in grown.iter_mut().enumerate().take(order - 1) {
                    if nbrs >> i & 1 == 1 {
                        *row |= 1 << (order - 1);
                    }
                }
                next.insert(canonical_code(&grown));
            }
        }
        level = next;
    }
    Ok(level.into_iter().map(move |code| to_graph(&decode(code, n))))
}

// 11 vertices = 55 code bits
const MAX_ORDER: usize = 11;

fn to_graph(adj: &[u32]) -> Graph {
    let mut g = Graph::numbered(adj.len());
    for (a, row) in adj.iter().enumerate() {
        for b in a + 1..adj.len() {
            if row >> b & 1 == 1 {
                g.connect(a, b);
            }
        }
    }
    g
}

/// Bit positions run column by column over the strict upper triangle:
/// (0,1), (0,2), (1,2), (0,3), ... with the first pair as the most
/// significant bit of the code.
fn code_of(adj: &[u32], order: &[usize]) -> u64 {
    let mut code = 0u64;
    for j in 1..order.len() {
        for i in 0..j {
            code = code << 1 | u64::from(adj[order[i]] >> order[j] & 1);
        }
    }
    code
}

fn decode(code: u64, n: usize) -> Vec<u32> {
    let total = n * (n.saturating_sub(1)) / 2;
    let mut adj = vec![0u32; n];
    let mut bit = total;
    for j in 1..n {
        for i in 0..j {
            bit -= 1;
            if code >> bit & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// Minimum adjacency code over all vertex orders that list the cells of the
/// stable degree-refined colouring in colour order. Colours are computed
/// without reference to labels, so the result is an isomorphism invariant.
pub(crate) fn canonical_code(adj: &[u32]) -> u64 {
    let colours = refine(adj);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let max = colours.iter().copied().max().unwrap_or(0);
    for c in 0..=max {
        cells.push((0..adj.len()).filter(|&v| colours[v] == c).collect());
    }
    let mut order = Vec::with_capacity(adj.len());
    let mut best = u64::MAX;
    permute_cells(adj, &cells, 0, &mut vec![false; adj.len()], &mut order, &mut best);
    best
}

fn permute_cells(
    adj: &[u32],
    cells: &[Vec<usize>],
    cell: usize,
    used: &mut Vec<bool>,
    order: &mut Vec<usize>,
    best: &mut u64,
) {
    if order.len() == adj.len() {
        *best = (*best).min(code_of(adj, order));
        return;
    }
    let cell = if cells[cell].iter().all(|&v| used[v]) { cell + 1 } else { cell };
    for &v in &cells[cell] {
        if !used[v] {
            used[v] = true;
            order.push(v);
            permute_cells(adj, cells, cell, used, order, best);
            order.pop();
            used[v] = false;
        }
    }
}

/// Colour refinement starting from degrees. Colours are ranks of sorted
/// signatures, so they depend only on the isomorphism class.
fn refine(adj: &[u32]) -> Vec<usize> {
    let n = adj.len();
    let mut colours: Vec<usize> = adj.iter().map(|r| r.count_ones() as usize).collect();
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut ns: Vec<usize> = (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(|u| colours[u]).collect();
                ns.sort_unstable();
                (colours[v], ns)
            })
            .collect();
        let distinct: BTreeSet<&(usize, Vec<usize>)> = signatures.iter().collect();
        let ranked: Vec<&(usize, Vec<usize>)> = distinct.into_iter().collect();
        let next: Vec<usize> = signatures.iter().map(|s| ranked.binary_search(&s).expect("present")).collect();
        let before = colours.iter().collect::<BTreeSet<_>>().len();
        let after = ranked.len();
        colours = next;
        if after == before {
            return colours;
        }
    }
}
