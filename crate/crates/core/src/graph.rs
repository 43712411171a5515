//! Simple undirected graphs with distinguished input and output vertex sets.
//!
//! Vertices are opaque string labels. Internally they are addressed by their
//! position in the vertex list, which is also the order used for rendering,
//! for graph-state qubit ordering and for bit masks.

mod enumerate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{connected_graphs, connected_graphs_with_cap, DEFAULT_ENUMERATION_CAP};

/// A set of vertex labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<String>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: &str) -> bool {
        self.0.contains(v)
    }

    pub fn insert(&mut self, v: impl Into<String>) -> bool {
        self.0.insert(v.into())
    }

    pub fn remove(&mut self, v: &str) -> bool {
        self.0.remove(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(String::as_str)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.difference(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn symmetric_difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.symmetric_difference(&other.0).cloned().collect())
    }
}

impl<S: Into<String>> FromIterator<S> for VertexSet {
    fn from_iter<T: IntoIterator<Item = S>>(iter: T) -> Self {
        VertexSet(iter.into_iter().map(Into::into).collect())
    }
}

impl IntoIterator for VertexSet {
    type Item = String;
    type IntoIter = std::collections::btree_set::IntoIter<String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a String;
    type IntoIter = std::collections::btree_set::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A simple graph `G = (V, E)` together with input set `I` and output set `O`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    index: BTreeMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
    inputs: BTreeSet<usize>,
    outputs: BTreeSet<usize>,
}

impl Graph {
    /// Edgeless graph on the given vertices with empty `I` and `O`.
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Result<Self> {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let adj = vec![BTreeSet::new(); vertices.len()];
        Ok(Self { vertices, index, adj, inputs: BTreeSet::new(), outputs: BTreeSet::new() })
    }

    pub fn from_parts<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)], inputs: &[S], outputs: &[S]) -> Result<Self> {
        let mut g = Graph::new(vertices.iter().map(|v| v.as_ref().to_string()))?;
        for (u, v) in edges {
            g.add_edge(u.as_ref(), v.as_ref())?;
        }
        g.set_inputs(inputs.iter().map(AsRef::as_ref))?;
        g.set_outputs(outputs.iter().map(AsRef::as_ref))?;
        Ok(g)
    }

    /// Path `1 - 2 - ... - n`.
    pub fn path(n: usize) -> Self {
        let mut g = Self::numbered(n);
        for i in 1..n {
            g.connect(i - 1, i);
        }
        g
    }

    /// Cycle `1 - 2 - ... - n - 1` (requires `n >= 3` to be simple).
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::path(n);
        if n >= 3 {
            g.connect(n - 1, 0);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::numbered(n);
        for i in 0..n {
            for j in i + 1..n {
                g.connect(i, j);
            }
        }
        g
    }

    fn numbered(n: usize) -> Self {
        Graph::new((1..=n).map(|i| i.to_string())).expect("distinct labels")
    }

    pub(crate) fn connect(&mut self, a: usize, b: usize) {
        debug_assert!(a != b);
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<()> {
        let a = self.index_of(u)?;
        let b = self.index_of(v)?;
        if a == b {
            return Err(Error::SelfLoop(u.to_string()));
        }
        if self.adj[a].contains(&b) {
            return Err(Error::DuplicateEdge(u.to_string(), v.to_string()));
        }
        self.connect(a, b);
        Ok(())
    }

    pub fn set_inputs<'a>(&mut self, inputs: impl IntoIterator<Item = &'a str>) -> Result<()> {
        self.inputs = self.indices(inputs)?;
        Ok(())
    }

    pub fn set_outputs<'a>(&mut self, outputs: impl IntoIterator<Item = &'a str>) -> Result<()> {
        self.outputs = self.indices(outputs)?;
        Ok(())
    }

    pub fn with_io<'a>(
        mut self,
        inputs: impl IntoIterator<Item = &'a str>,
        outputs: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self> {
        self.set_inputs(inputs)?;
        self.set_outputs(outputs)?;
        Ok(self)
    }

    fn indices<'a>(&self, labels: impl IntoIterator<Item = &'a str>) -> Result<BTreeSet<usize>> {
        labels.into_iter().map(|l| self.index_of(l)).collect()
    }

    pub fn index_of(&self, v: &str) -> Result<usize> {
        self.index.get(v).copied().ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn contains(&self, v: &str) -> bool {
        self.index.contains_key(v)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    /// Edges as label pairs, ordered by vertex position (`u` before `v`).
    pub fn edges(&self) -> Vec<(String, String)> {
        self.edge_indices().map(|(a, b)| (self.vertices[a].clone(), self.vertices[b].clone())).collect()
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(a, ns)| ns.range(a + 1..).map(move |&b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: &str, v: &str) -> Result<bool> {
        Ok(self.adj[self.index_of(u)?].contains(&self.index_of(v)?))
    }

    pub(crate) fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub(crate) fn neighbor_indices(&self, a: usize) -> &BTreeSet<usize> {
        &self.adj[a]
    }

    pub fn inputs(&self) -> VertexSet {
        self.labels_of(&self.inputs)
    }

    pub fn outputs(&self) -> VertexSet {
        self.labels_of(&self.outputs)
    }

    /// Inputs in vertex order.
    pub fn input_labels(&self) -> Vec<String> {
        self.inputs.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    /// Outputs in vertex order.
    pub fn output_labels(&self) -> Vec<String> {
        self.outputs.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    pub(crate) fn input_indices(&self) -> &BTreeSet<usize> {
        &self.inputs
    }

    pub(crate) fn output_indices(&self) -> &BTreeSet<usize> {
        &self.outputs
    }

    pub fn is_input(&self, v: &str) -> bool {
        self.index.get(v).is_some_and(|i| self.inputs.contains(i))
    }

    pub fn is_output(&self, v: &str) -> bool {
        self.index.get(v).is_some_and(|i| self.outputs.contains(i))
    }

    fn labels_of(&self, idx: &BTreeSet<usize>) -> VertexSet {
        idx.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    fn check_subset(&self, k: &VertexSet) -> Result<BTreeSet<usize>> {
        k.iter().map(|v| self.index_of(v)).collect()
    }

    /// `N_v`, the neighbourhood of `v`.
    pub fn neighbors(&self, v: &str) -> Result<VertexSet> {
        let a = self.index_of(v)?;
        Ok(self.labels_of(&self.adj[a]))
    }

    /// `Odd(K)`: vertices with an odd number of neighbours in `K`.
    pub fn odd_neighborhood(&self, k: &VertexSet) -> Result<VertexSet> {
        let k = self.check_subset(k)?;
        Ok(self.labels_of(&self.odd_indices(&k)))
    }

    pub(crate) fn odd_indices(&self, k: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.vertices.len()).filter(|&u| self.adj[u].intersection(k).count() % 2 == 1).collect()
    }

    /// True iff `part` and its complement are both independent sets, i.e. the
    /// graph is bipartite with `part` as one side.
    pub fn bipartition_check(&self, part: &VertexSet) -> Result<bool> {
        let part = self.check_subset(part)?;
        Ok(self.edge_indices().all(|(a, b)| part.contains(&a) != part.contains(&b)))
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(a) = stack.pop() {
            for &b in &self.adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The entangling edge set of the graph state with input: every edge not
    /// entirely contained in `I`.
    pub fn resource_graph(&self) -> Graph {
        let mut g = self.clone();
        for adj in g.adj.iter_mut() {
            adj.clear();
        }
        for (a, b) in self.edge_indices() {
            if !(self.inputs.contains(&a) && self.inputs.contains(&b)) {
                g.connect(a, b);
            }
        }
        g
    }

    /// Adjacency rows as bit masks (bit `i` is vertex `i`). Requires at most
    /// 64 vertices.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.vertices.len() <= 64);
        self.adj.iter().map(|ns| ns.iter().fold(0u64, |m, &b| m | 1 << b)).collect()
    }

    /// Graphviz rendering; inputs are drawn as boxes, everything else as circles.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = if self.inputs.contains(&i) { "box" } else { "circle" };
            let _ = writeln!(out, "  {} [shape={}];", dot_id(v), shape);
        }
        for (a, b) in self.edge_indices() {
            let _ = writeln!(out, "  {} -- {};", dot_id(&self.vertices[a]), dot_id(&self.vertices[b]));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            inputs: self.input_labels(),
            outputs: self.output_labels(),
        }
    }
}

fn dot_id(v: &str) -> String {
    format!("\"{}\"", v.replace('\\', "\\\\").replace('"', "\\\""))
}

/// `{"vertices":[...], "edges":[[u,v],...], "inputs":[...], "outputs":[...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let mut g = Graph::new(j.vertices)?;
        for [u, v] in &j.edges {
            g.add_edge(u, v)?;
        }
        g.set_inputs(j.inputs.iter().map(String::as_str))?;
        g.set_outputs(j.outputs.iter().map(String::as_str))?;
        Ok(g)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Graph::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[&str]) -> VertexSet {
        vs.iter().copied().collect()
    }

    fn p3() -> Graph {
        Graph::path(3)
    }

    #[test]
    fn neighbors_examples() {
        assert_eq!(p3().neighbors("2").unwrap(), set(&["1", "3"]));
        let lonely = Graph::new(["a"]).unwrap();
        assert!(lonely.neighbors("a").unwrap().is_empty());
        assert_eq!(Graph::cycle(6).neighbors("1").unwrap(), set(&["2", "6"]));
        assert_eq!(p3().neighbors("9"), Err(Error::UnknownVertex("9".into())));
    }

    #[test]
    fn odd_neighborhood_examples() {
        let c6 = Graph::cycle(6);
        assert!(c6.odd_neighborhood(&VertexSet::new()).unwrap().is_empty());
        assert_eq!(c6.odd_neighborhood(&set(&["2"])).unwrap(), set(&["1", "3"]));
        // vertex 3 sees both 2 and 4, so it drops out
        assert_eq!(c6.odd_neighborhood(&set(&["2", "4"])).unwrap(), set(&["1", "5"]));
        assert!(c6.odd_neighborhood(&set(&["7"])).is_err());
    }

    #[test]
    fn bipartition_examples() {
        assert!(p3().bipartition_check(&set(&["1", "3"])).unwrap());
        assert!(!p3().bipartition_check(&set(&["1", "2"])).unwrap());
        let k3 = Graph::complete(3);
        for part in [set(&[]), set(&["1"]), set(&["1", "2"]), set(&["1", "2", "3"])] {
            assert!(!k3.bipartition_check(&part).unwrap());
        }
    }

    #[test]
    fn construction_rejects_non_simple() {
        let mut g = Graph::new(["a", "b"]).unwrap();
        assert_eq!(g.add_edge("a", "a"), Err(Error::SelfLoop("a".into())));
        g.add_edge("a", "b").unwrap();
        assert!(matches!(g.add_edge("b", "a"), Err(Error::DuplicateEdge(..))));
        assert!(matches!(Graph::new(["a", "a"]), Err(Error::DuplicateVertex(_))));
        assert!(g.set_inputs(["c"]).is_err());
    }

    #[test]
    fn resource_graph_drops_input_edges() {
        let g = Graph::complete(3).with_io(["1", "2"], ["1", "2"]).unwrap();
        let r = g.resource_graph();
        assert_eq!(r.edge_count(), 2);
        assert!(!r.has_edge("1", "2").unwrap());
        assert_eq!(r.inputs(), g.inputs());
    }

    #[test]
    fn json_and_dot() {
        let g = p3().with_io(["1", "3"], ["1", "3"]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(
            text,
            r#"{"vertices":["1","2","3"],"edges":[["1","2"],["2","3"]],"inputs":["1","3"],"outputs":["1","3"]}"#
        );
        let back: Graph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let dot = g.to_dot();
        assert!(dot.contains("\"1\" [shape=box];"));
        assert!(dot.contains("\"2\" [shape=circle];"));
        assert!(dot.contains("\"2\" -- \"3\";"));
        let bad = r#"{"vertices":["1"],"edges":[["1","1"]]}"#;
        assert!(serde_json::from_str::<Graph>(bad).is_err());
    }
}
