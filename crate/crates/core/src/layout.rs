//! LHZ parity layouts: data qubits, parity qubits with their parity sets, and
//! the ordered CNOT constraint list that realises the encoding.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParityQubit {
    pub label: String,
    pub set: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityLayout {
    data: Vec<String>,
    parity: Vec<ParityQubit>,
    constraints: Vec<(String, String)>,
}

impl ParityLayout {
    /// Data qubits are labelled `"1"..="n"`. Checks labels and parity sets;
    /// whether the constraints realise the parity sets is a separate question
    /// answered by [`ParityLayout::validate_constraints`].
    pub fn new(n: usize, parity: Vec<ParityQubit>, constraints: Vec<(String, String)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLayout("n must be at least 1".into()));
        }
        let data: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let data_set: BTreeSet<&str> = data.iter().map(String::as_str).collect();
        let mut labels: BTreeSet<&str> = data_set.clone();
        let mut sets = BTreeSet::new();
        for p in &parity {
            if !labels.insert(&p.label) {
                return Err(Error::InvalidLayout(format!("duplicate qubit label {}", p.label)));
            }
            let set: BTreeSet<&str> = p.set.iter().map(String::as_str).collect();
            if set.len() != p.set.len() {
                return Err(Error::InvalidLayout(format!("repeated member in parity set of {}", p.label)));
            }
            if set.len() < 2 {
                return Err(Error::InvalidLayout(format!("parity set of {} has fewer than 2 members", p.label)));
            }
            if let Some(bad) = set.iter().find(|d| !data_set.contains(*d)) {
                return Err(Error::InvalidLayout(format!("parity set of {} names non-data qubit {bad}", p.label)));
            }
            if !sets.insert(set) {
                return Err(Error::InvalidLayout(format!("parity set of {} duplicates another", p.label)));
            }
        }
        for (c, t) in &constraints {
            for q in [c, t] {
                if !labels.contains(q.as_str()) {
                    return Err(Error::InvalidLayout(format!("constraint names unknown qubit {q}")));
                }
            }
            if c == t {
                return Err(Error::InvalidLayout(format!("constraint ({c}, {t}) has control = target")));
            }
        }
        Ok(Self { data, parity, constraints })
    }

    /// Every unordered pair `i < j` gets a parity qubit `(ij)` fed by CNOTs
    /// from `i` and then `j`; pairs in lexicographic order.
    pub fn all_pairs(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidLayout("n must be at least 1".into()));
        }
        let mut parity = Vec::new();
        let mut constraints = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                let label = pair_label(i, j, n);
                constraints.push((i.to_string(), label.clone()));
                constraints.push((j.to_string(), label.clone()));
                parity.push(ParityQubit { label, set: vec![i.to_string(), j.to_string()] });
            }
        }
        Self::new(n, parity, constraints)
    }

    pub fn n(&self) -> usize {
        self.data.len()
    }

    pub fn data_qubits(&self) -> &[String] {
        &self.data
    }

    pub fn parity_qubits(&self) -> &[ParityQubit] {
        &self.parity
    }

    pub fn parity_labels(&self) -> Vec<String> {
        self.parity.iter().map(|p| p.label.clone()).collect()
    }

    pub fn parity(&self, label: &str) -> Option<&ParityQubit> {
        self.parity.iter().find(|p| p.label == label)
    }

    pub fn constraints(&self) -> &[(String, String)] {
        &self.constraints
    }

    /// Data qubits followed by parity qubits.
    pub fn all_qubits(&self) -> Vec<String> {
        self.data.iter().cloned().chain(self.parity.iter().map(|p| p.label.clone())).collect()
    }

    pub fn total_qubits(&self) -> usize {
        self.data.len() + self.parity.len()
    }

    /// The encoding unitary as the constraint CNOTs in stored order.
    pub fn encoding_circuit(&self) -> Circuit {
        Circuit(self.constraints.iter().map(|(c, t)| Gate::Cnot(c.clone(), t.clone())).collect())
    }

    /// Bipartite graph with an edge between every parity qubit and each member
    /// of its parity set; `I = O =` data qubits.
    pub fn induced_graph(&self) -> Graph {
        let mut g = Graph::new(self.all_qubits()).expect("labels validated");
        for p in &self.parity {
            for d in &p.set {
                g.add_edge(&p.label, d).expect("validated, simple");
            }
        }
        let data: Vec<&str> = self.data.iter().map(String::as_str).collect();
        g.with_io(data.iter().copied(), data.iter().copied()).expect("data qubits present")
    }

    /// Runs the constraint CNOTs classically on every data basis state and
    /// checks that each parity qubit ends up holding its declared parity.
    pub fn validate_constraints(&self) -> ConstraintReport {
        let qubits = self.all_qubits();
        let index: BTreeMap<&str, usize> = qubits.iter().enumerate().map(|(i, q)| (q.as_str(), i)).collect();
        let n = self.n();
        let cnots: Vec<(usize, usize)> =
            self.constraints.iter().map(|(c, t)| (index[c.as_str()], index[t.as_str()])).collect();
        let sets: Vec<(usize, Vec<usize>)> = self
            .parity
            .iter()
            .map(|p| (index[p.label.as_str()], p.set.iter().map(|d| index[d.as_str()]).collect()))
            .collect();
        for x in 0u64..(1 << n) {
            let mut bits = vec![false; qubits.len()];
            // qubit "1" is the most significant bit of x
            for (i, b) in bits.iter_mut().enumerate().take(n) {
                *b = x >> (n - 1 - i) & 1 == 1;
            }
            for &(c, t) in &cnots {
                bits[t] ^= bits[c];
            }
            for (p, set) in &sets {
                let want = set.iter().fold(false, |acc, &d| acc ^ (x >> (n - 1 - d) & 1 == 1));
                if bits[*p] != want {
                    return ConstraintReport {
                        valid: false,
                        counterexample: Some(format!("{x:0n$b}")),
                        parity_qubit: Some(qubits[*p].clone()),
                    };
                }
            }
            if let Some(d) = (0..n).find(|&d| bits[d] != (x >> (n - 1 - d) & 1 == 1)) {
                return ConstraintReport {
                    valid: false,
                    counterexample: Some(format!("{x:0n$b}")),
                    parity_qubit: Some(qubits[d].clone()),
                };
            }
        }
        ConstraintReport { valid: true, counterexample: None, parity_qubit: None }
    }

    pub fn to_json(&self) -> LayoutJson {
        LayoutJson {
            n: self.n(),
            parity: self.parity.clone(),
            constraints: self.constraints.iter().map(|(c, t)| [c.clone(), t.clone()]).collect(),
        }
    }
}

fn pair_label(i: usize, j: usize, n: usize) -> String {
    if n < 10 {
        format!("({i}{j})")
    } else {
        format!("({i},{j})")
    }
}

/// Outcome of [`ParityLayout::validate_constraints`]. On failure the
/// counterexample is the data basis state as a bit string (qubit `1` first)
/// and the qubit whose value came out wrong.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub valid: bool,
    pub counterexample: Option<String>,
    pub parity_qubit: Option<String>,
}

/// `{"n":…, "parity":[{"label":"(12)","set":["1","2"]},…], "constraints":[["1","(12)"],…]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutJson {
    pub n: usize,
    #[serde(default)]
    pub parity: Vec<ParityQubit>,
    #[serde(default)]
    pub constraints: Vec<[String; 2]>,
}

impl TryFrom<LayoutJson> for ParityLayout {
    type Error = Error;

    fn try_from(j: LayoutJson) -> Result<Self> {
        ParityLayout::new(j.n, j.parity, j.constraints.into_iter().map(|[c, t]| (c, t)).collect())
    }
}

impl Serialize for ParityLayout {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParityLayout {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ParityLayout::try_from(LayoutJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Cnot(String, String),
    Cz(String, String),
    H(String),
    X(String),
    Z(String),
    /// `exp(-i θ Z / 2)`
    Rz(String, f64),
    /// `exp(-i θ X / 2)`
    Rx(String, f64),
}

impl Gate {
    pub fn qubits(&self) -> Vec<&str> {
        match self {
            Gate::Cnot(a, b) | Gate::Cz(a, b) => vec![a, b],
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::Rz(q, _) | Gate::Rx(q, _) => vec![q],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot(c, t) => write!(f, "CNOT {c} {t}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
            Gate::H(q) => write!(f, "H {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
            Gate::Rz(q, t) => write!(f, "RZ {q} {t}"),
            Gate::Rx(q, t) => write!(f, "RX {q} {t}"),
        }
    }
}

/// An ordered gate list.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit(pub Vec<Gate>);

impl Circuit {
    pub fn gates(&self) -> &[Gate] {
        &self.0
    }

    pub fn push(&mut self, g: Gate) {
        self.0.push(g);
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One gate per line.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.0 {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;

    fn strs(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn all_pairs_examples() {
        let l2 = ParityLayout::all_pairs(2).unwrap();
        assert_eq!(l2.data_qubits(), strs(&["1", "2"]));
        assert_eq!(l2.parity_labels(), strs(&["(12)"]));
        assert_eq!(l2.constraints(), &[("1".into(), "(12)".into()), ("2".into(), "(12)".into())]);
        assert_eq!(l2.total_qubits(), 3);

        let l1 = ParityLayout::all_pairs(1).unwrap();
        assert!(l1.parity_qubits().is_empty() && l1.constraints().is_empty());

        let l3 = ParityLayout::all_pairs(3).unwrap();
        assert_eq!(l3.parity_labels(), strs(&["(12)", "(13)", "(23)"]));
        assert!(ParityLayout::all_pairs(0).is_err());
    }

    #[test]
    fn qubit_counts() {
        for n in 1..=8 {
            let l = ParityLayout::all_pairs(n).unwrap();
            assert_eq!(l.total_qubits(), n * (n + 1) / 2);
            assert_eq!(l.parity_qubits().len(), n * (n - 1) / 2);
        }
    }

    #[test]
    fn encoding_circuit_rendering() {
        let l2 = ParityLayout::all_pairs(2).unwrap();
        assert_eq!(l2.encoding_circuit().to_string(), "CNOT 1 (12)\nCNOT 2 (12)\n");
        assert!(ParityLayout::all_pairs(1).unwrap().encoding_circuit().is_empty());
    }

    #[test]
    fn induced_graph_examples() {
        let g2 = ParityLayout::all_pairs(2).unwrap().induced_graph();
        assert_eq!(g2.edges(), vec![("1".into(), "(12)".into()), ("2".into(), "(12)".into())]);
        assert_eq!(g2.inputs(), ["1", "2"].into_iter().collect::<VertexSet>());
        assert_eq!(g2.outputs(), g2.inputs());

        let g3 = ParityLayout::all_pairs(3).unwrap().induced_graph();
        assert_eq!(g3.edge_count(), 6);
        for (a, b) in [("1", "(12)"), ("(12)", "2"), ("2", "(23)"), ("(23)", "3"), ("3", "(13)"), ("(13)", "1")] {
            assert!(g3.has_edge(a, b).unwrap());
        }
        assert!(g3.vertices().iter().all(|v| g3.neighbors(v).unwrap().len() == 2));
        assert!(g3.is_connected());

        for n in 1..=6 {
            let g = ParityLayout::all_pairs(n).unwrap().induced_graph();
            assert!(g.bipartition_check(&g.inputs()).unwrap());
        }
    }

    #[test]
    fn constraint_validation() {
        for n in 1..=4 {
            assert!(ParityLayout::all_pairs(n).unwrap().validate_constraints().valid);
        }
        let p = vec![ParityQubit { label: "(12)".into(), set: strs(&["1", "2"]) }];
        let l = ParityLayout::new(2, p, vec![("1".into(), "(12)".into())]).unwrap();
        let r = l.validate_constraints();
        assert!(!r.valid);
        assert_eq!(r.counterexample.as_deref(), Some("01"));
        assert_eq!(r.parity_qubit.as_deref(), Some("(12)"));
    }

    fn chain_layout(order: &[(&str, &str)]) -> ParityLayout {
        let parity = vec![
            ParityQubit { label: "(12)".into(), set: strs(&["1", "2"]) },
            ParityQubit { label: "(13)".into(), set: strs(&["1", "3"]) },
        ];
        let c = order.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        ParityLayout::new(3, parity, c).unwrap()
    }

    #[test]
    fn parity_controlled_chain() {
        // (13) = x1 ⊕ x3 built as (x1 ⊕ x2) ⊕ x2 ⊕ x3 using (12) as a control
        let good = chain_layout(&[("1", "(12)"), ("2", "(12)"), ("(12)", "(13)"), ("2", "(13)"), ("3", "(13)")]);
        assert!(good.validate_constraints().valid);
        // same gates, but (12) is read before it holds its parity
        let bad = chain_layout(&[("(12)", "(13)"), ("1", "(12)"), ("2", "(12)"), ("2", "(13)"), ("3", "(13)")]);
        let r = bad.validate_constraints();
        assert!(!r.valid);
        assert_eq!(r.parity_qubit.as_deref(), Some("(13)"));
    }

    #[test]
    fn parity_control_into_data_is_caught() {
        let parity = vec![ParityQubit { label: "(12)".into(), set: strs(&["1", "2"]) }];
        let c = vec![("1".into(), "(12)".into()), ("2".into(), "(12)".into()), ("(12)".into(), "1".into())];
        let r = ParityLayout::new(2, parity, c).unwrap().validate_constraints();
        assert!(!r.valid);
        assert_eq!(r.parity_qubit.as_deref(), Some("1"));
    }

    #[test]
    fn structural_errors() {
        let p = |l: &str, s: &[&str]| ParityQubit { label: l.into(), set: strs(s) };
        assert!(ParityLayout::new(2, vec![p("(12)", &["1"])], vec![]).is_err());
        assert!(ParityLayout::new(2, vec![p("(12)", &["1", "3"])], vec![]).is_err());
        assert!(ParityLayout::new(2, vec![p("1", &["1", "2"])], vec![]).is_err());
        assert!(ParityLayout::new(3, vec![p("a", &["1", "2"]), p("b", &["2", "1"])], vec![]).is_err());
        assert!(ParityLayout::new(2, vec![p("a", &["1", "2"])], vec![("a".into(), "a".into())]).is_err());
        assert!(ParityLayout::new(2, vec![p("a", &["1", "2"])], vec![("z".into(), "a".into())]).is_err());
    }

    #[test]
    fn layout_json() {
        let l = ParityLayout::all_pairs(2).unwrap();
        let text = serde_json::to_string(&l).unwrap();
        assert_eq!(
            text,
            r#"{"n":2,"parity":[{"label":"(12)","set":["1","2"]}],"constraints":[["1","(12)"],["2","(12)"]]}"#
        );
        assert_eq!(serde_json::from_str::<ParityLayout>(&text).unwrap(), l);
        assert!(serde_json::from_str::<ParityLayout>(r#"{"n":0}"#).is_err());
    }
}
