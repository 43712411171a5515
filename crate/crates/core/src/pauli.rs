//! Signed Pauli strings in the symplectic GF(2) picture and stabilizer
//! groups generated by them.
//!
//! A Pauli string is `sign * P_1 ⊗ ... ⊗ P_n` where each factor is encoded
//! by a bit pair `(x, z)`: `(0,0) = I`, `(1,0) = X`, `(0,1) = Z`,
//! `(1,1) = Y`. Only real signs are representable.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::layout::ParityLayout;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Z => (false, true),
            Pauli::Y => (true, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: Vec<bool>,
    z: Vec<bool>,
    negative: bool,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self { x: vec![false; n], z: vec![false; n], negative: false }
    }

    pub fn from_paulis(factors: &[Pauli], negative: bool) -> Self {
        let (x, z) = factors.iter().map(|p| p.bits()).unzip();
        Self { x, z, negative }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x[q], self.z[q])
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        (self.x[q], self.z[q]) = p.bits();
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn negate(&mut self) {
        self.negative = !self.negative;
    }

    /// True when all bits are zero (sign ignored).
    pub fn is_identity_up_to_sign(&self) -> bool {
        !self.x.iter().chain(&self.z).any(|&b| b)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let mut odd = false;
        for q in 0..self.len() {
            odd ^= (self.x[q] & other.z[q]) ^ (self.z[q] & other.x[q]);
        }
        !odd
    }

    /// `self * other` for commuting strings. Anticommuting products carry a
    /// factor of `±i`, which is outside the representable set.
    pub fn mul(&self, other: &PauliString) -> Option<PauliString> {
        assert_eq!(self.len(), other.len());
        // exponent of i accumulated from single-qubit products
        let mut phase: i32 = 0;
        for q in 0..self.len() {
            phase += phase_exponent(self.x[q], self.z[q], other.x[q], other.z[q]);
        }
        phase += 2 * (i32::from(self.negative) + i32::from(other.negative));
        let phase = phase.rem_euclid(4);
        if phase % 2 == 1 {
            return None;
        }
        Some(PauliString {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
            negative: phase == 2,
        })
    }

    /// `H P H` on qubit `q`: swaps X and Z, and sends Y to -Y.
    pub fn conjugate_hadamard(&mut self, q: usize) {
        if self.x[q] && self.z[q] {
            self.negative = !self.negative;
        }
        std::mem::swap(&mut self.x[q], &mut self.z[q]);
    }

    fn symplectic_row(&self) -> Vec<bool> {
        self.x.iter().chain(&self.z).copied().collect()
    }

    /// Renders as e.g. `-X_(12) Z_1`, factors in qubit order.
    pub fn render(&self, labels: &[String]) -> String {
        let body: Vec<String> = (0..self.len())
            .filter_map(|q| {
                let p = match self.get(q) {
                    Pauli::I => return None,
                    Pauli::X => 'X',
                    Pauli::Y => 'Y',
                    Pauli::Z => 'Z',
                };
                Some(format!("{p}_{}", labels[q]))
            })
            .collect();
        let body = if body.is_empty() { "I".to_string() } else { body.join(" ") };
        if self.negative {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Inverse of [`PauliString::render`]; factors may appear in any order.
    pub fn parse(text: &str, labels: &[String]) -> Result<Self> {
        let err = || Error::PauliParse(text.to_string());
        let mut s = text.trim();
        let mut out = PauliString::identity(labels.len());
        if let Some(rest) = s.strip_prefix('-') {
            out.negative = true;
            s = rest.trim_start();
        } else if let Some(rest) = s.strip_prefix('+') {
            s = rest.trim_start();
        }
        if s == "I" {
            return Ok(out);
        }
        let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        for factor in s.split_whitespace() {
            let (p, label) = factor.split_once('_').ok_or_else(err)?;
            let p = match p {
                "X" => Pauli::X,
                "Y" => Pauli::Y,
                "Z" => Pauli::Z,
                _ => return Err(err()),
            };
            let q = *index.get(label).ok_or_else(|| Error::UnknownQubit(label.to_string()))?;
            if out.get(q) != Pauli::I {
                return Err(err());
            }
            out.set(q, p);
        }
        Ok(out)
    }
}

/// Exponent `k` in `P1 P2 = i^k P3` for single-qubit factors given as bits.
fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (i32::from(x2), i32::from(z2));
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

/// An abelian group of Pauli operators given by independent generators over
/// an ordered list of qubit labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGroup {
    qubits: Vec<String>,
    generators: Vec<PauliString>,
}

impl StabilizerGroup {
    /// Validates commutation and independence (which also excludes `-I`).
    pub fn new(qubits: Vec<String>, generators: Vec<PauliString>) -> Result<Self> {
        for g in &generators {
            if g.len() != qubits.len() {
                return Err(Error::LabelMismatch(format!(
                    "generator over {} qubits, group over {}",
                    g.len(),
                    qubits.len()
                )));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes_with(b) {
                    return Err(Error::NonCommuting(a.render(&qubits), b.render(&qubits)));
                }
            }
        }
        let rows: Vec<Vec<bool>> = generators.iter().map(PauliString::symplectic_row).collect();
        if gf2_rank(rows) != generators.len() {
            return Err(Error::DependentGenerators);
        }
        Ok(Self { qubits, generators })
    }

    pub fn qubits(&self) -> &[String] {
        &self.qubits
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn rendered(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.render(&self.qubits)).collect()
    }

    fn qubit_index(&self, label: &str) -> Result<usize> {
        self.qubits.iter().position(|q| q == label).ok_or_else(|| Error::UnknownQubit(label.to_string()))
    }

    /// Conjugates every generator by `H` on each qubit in `subset`.
    pub fn hadamard_conjugate(&self, subset: &VertexSet) -> Result<Self> {
        let idx: Vec<usize> = subset.iter().map(|q| self.qubit_index(q)).collect::<Result<_>>()?;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let mut g = g.clone();
                for &q in &idx {
                    g.conjugate_hadamard(q);
                }
                g
            })
            .collect();
        Ok(Self { qubits: self.qubits.clone(), generators })
    }

    /// Same group over the same label set, with qubits listed in `order`.
    pub fn reordered(&self, order: &[String]) -> Result<Self> {
        if order.len() != self.qubits.len() {
            return Err(Error::IncompatibleLabels);
        }
        let src: Vec<usize> =
            order.iter().map(|l| self.qubit_index(l).map_err(|_| Error::IncompatibleLabels)).collect::<Result<_>>()?;
        let generators = self
            .generators
            .iter()
            .map(|g| {
                let factors: Vec<Pauli> = src.iter().map(|&q| g.get(q)).collect();
                PauliString::from_paulis(&factors, g.negative)
            })
            .collect();
        Ok(Self { qubits: order.to_vec(), generators })
    }

    /// Whether `p` (sign included) is an element of the group.
    pub fn contains(&self, p: &PauliString) -> bool {
        let mut rows = self.generators.clone();
        let mut target = p.clone();
        let width = 2 * self.qubits.len();
        let bit = |s: &PauliString, c: usize| {
            if c < s.x.len() {
                s.x[c]
            } else {
                s.z[c - s.x.len()]
            }
        };
        let mut pivot_row = 0;
        for col in 0..width {
            let Some(r) = (pivot_row..rows.len()).find(|&r| bit(&rows[r], col)) else {
                continue;
            };
            rows.swap(pivot_row, r);
            for r in 0..rows.len() {
                if r != pivot_row && bit(&rows[r], col) {
                    rows[r] = rows[r].mul(&rows[pivot_row]).expect("group elements commute");
                }
            }
            if bit(&target, col) {
                match target.mul(&rows[pivot_row]) {
                    Some(t) => target = t,
                    None => return false,
                }
            }
            pivot_row += 1;
        }
        target.is_identity_up_to_sign() && !target.negative
    }
}

/// Generated groups (signs included) are identical. Label order may differ
/// between the two groups but the label sets must agree.
pub fn groups_equal(a: &StabilizerGroup, b: &StabilizerGroup) -> Result<bool> {
    let b = b.reordered(&a.qubits)?;
    if a.len() != b.len() {
        return Ok(false);
    }
    Ok(b.generators.iter().all(|g| a.contains(g)) && a.generators.iter().all(|g| b.contains(g)))
}

fn gf2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, r);
        for r in 0..rows.len() {
            if r != rank && rows[r][col] {
                let pivot = rows[rank].clone();
                for (a, b) in rows[r].iter_mut().zip(pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `K'_p = Z_p ⊗ Z_{S(p)}` for every parity qubit `p`, over the layout's
/// qubits (data first, then parity).
pub fn parity_generators(layout: &ParityLayout) -> StabilizerGroup {
    let qubits = layout.all_qubits();
    let index: BTreeMap<&str, usize> = qubits.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let generators = layout
        .parity_qubits()
        .iter()
        .map(|p| {
            let mut s = PauliString::identity(qubits.len());
            s.set(index[p.label.as_str()], Pauli::Z);
            for d in &p.set {
                s.set(index[d.as_str()], Pauli::Z);
            }
            s
        })
        .collect();
    StabilizerGroup::new(qubits, generators).expect("parity checks are independent Z strings")
}

/// `K_v = X_v ⊗ Z_{N_v}` for every non-input vertex, over the graph's vertices.
pub fn graph_generators(g: &Graph) -> StabilizerGroup {
    let n = g.vertex_count();
    let generators = (0..n)
        .filter(|v| !g.input_indices().contains(v))
        .map(|v| {
            let mut s = PauliString::identity(n);
            s.set(v, Pauli::X);
            for &u in g.neighbor_indices(v) {
                s.set(u, Pauli::Z);
            }
            s
        })
        .collect();
    StabilizerGroup::new(g.vertices().to_vec(), generators).expect("graph-code generators are independent and commute")
}

/// `{"qubits":[...], "generators":["Z_1 Z_2 Z_(12)", ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilizerJson {
    pub qubits: Vec<String>,
    pub generators: Vec<String>,
}

impl From<&StabilizerGroup> for StabilizerJson {
    fn from(s: &StabilizerGroup) -> Self {
        Self { qubits: s.qubits.clone(), generators: s.rendered() }
    }
}

impl TryFrom<StabilizerJson> for StabilizerGroup {
    type Error = Error;

    fn try_from(j: StabilizerJson) -> Result<Self> {
        let gens = j.generators.iter().map(|t| PauliString::parse(t, &j.qubits)).collect::<Result<_>>()?;
        StabilizerGroup::new(j.qubits, gens)
    }
}

impl fmt::Display for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.rendered().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::ParityLayout;

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    fn group(qs: &[&str], gens: &[&str]) -> StabilizerGroup {
        let qs = labels(qs);
        let gens = gens.iter().map(|g| PauliString::parse(g, &qs).unwrap()).collect();
        StabilizerGroup::new(qs, gens).unwrap()
    }

    #[test]
    fn parity_generator_examples() {
        let g2 = parity_generators(&ParityLayout::all_pairs(2).unwrap());
        assert_eq!(g2.rendered(), vec!["Z_1 Z_2 Z_(12)"]);
        assert!(parity_generators(&ParityLayout::all_pairs(1).unwrap()).is_empty());
        let g3 = parity_generators(&ParityLayout::all_pairs(3).unwrap());
        assert_eq!(g3.rendered(), vec!["Z_1 Z_2 Z_(12)", "Z_1 Z_3 Z_(13)", "Z_2 Z_3 Z_(23)"]);
    }

    #[test]
    fn graph_generator_examples() {
        let p3 = Graph::from_parts(&["1", "c", "3"], &[("1", "c"), ("c", "3")], &["1", "3"], &[]).unwrap();
        assert_eq!(graph_generators(&p3).rendered(), vec!["Z_1 X_c Z_3"]);
        let single = Graph::new(["a"]).unwrap().with_io(["a"], []).unwrap();
        assert!(graph_generators(&single).is_empty());
        let c6 = Graph::cycle(6).with_io(["1", "3", "5"], []).unwrap();
        assert_eq!(graph_generators(&c6).rendered(), vec!["Z_1 X_2 Z_3", "Z_3 X_4 Z_5", "Z_1 Z_5 X_6"]);
    }

    #[test]
    fn hadamard_examples() {
        let g = group(&["1", "2", "(12)"], &["Z_(12) Z_1 Z_2"]);
        let h: VertexSet = ["(12)"].into_iter().collect();
        let conj = g.hadamard_conjugate(&h).unwrap();
        assert_eq!(conj.rendered(), vec!["Z_1 Z_2 X_(12)"]);
        assert_eq!(conj.hadamard_conjugate(&h).unwrap(), g);

        // HYH = [[1,1],[1,-1]]/√2 · [[0,-i],[i,0]] · [[1,1],[1,-1]]/√2 = [[0,i],[-i,0]] = -Y
        let y = group(&["q"], &["Y_q"]);
        let hy = y.hadamard_conjugate(&["q"].into_iter().collect()).unwrap();
        assert_eq!(hy.rendered(), vec!["-Y_q"]);
    }

    #[test]
    fn groups_equal_examples() {
        let a = group(&["1", "2", "3"], &["Z_1 Z_2", "Z_2 Z_3"]);
        let b = group(&["1", "2", "3"], &["Z_2 Z_3", "Z_1 Z_2"]);
        assert!(groups_equal(&a, &b).unwrap());
        // (Z1Z2)(Z2Z3) = Z1Z3; the four elements are {I, Z1Z2, Z2Z3, Z1Z3} in both cases
        let c = group(&["1", "2", "3"], &["Z_1 Z_3", "Z_2 Z_3"]);
        assert!(groups_equal(&a, &c).unwrap());
        assert!(!groups_equal(&group(&["1"], &["Z_1"]), &group(&["1"], &["X_1"])).unwrap());
        assert!(!groups_equal(&group(&["1"], &["Z_1"]), &group(&["1"], &["-Z_1"])).unwrap());
        assert_eq!(groups_equal(&group(&["1"], &["Z_1"]), &group(&["2"], &["Z_2"])), Err(Error::IncompatibleLabels));
        // label order is irrelevant
        let d = group(&["3", "2", "1"], &["Z_3 Z_1", "Z_2 Z_3"]);
        assert!(groups_equal(&a, &d).unwrap());
    }

    #[test]
    fn group_invariants_enforced() {
        let qs = labels(&["1"]);
        let x = PauliString::parse("X_1", &qs).unwrap();
        let z = PauliString::parse("Z_1", &qs).unwrap();
        assert!(matches!(StabilizerGroup::new(qs.clone(), vec![x, z.clone()]), Err(Error::NonCommuting(..))));
        let mut mz = z.clone();
        mz.negate();
        assert_eq!(StabilizerGroup::new(qs, vec![z, mz]), Err(Error::DependentGenerators));
    }

    #[test]
    fn products_track_signs() {
        let qs = labels(&["a", "b"]);
        let xx = PauliString::parse("X_a X_b", &qs).unwrap();
        let zz = PauliString::parse("Z_a Z_b", &qs).unwrap();
        // XZ ⊗ XZ = (-iY) ⊗ (-iY) = -YY
        assert_eq!(xx.mul(&zz).unwrap().render(&qs), "-Y_a Y_b");
        let xa = PauliString::parse("X_a", &qs).unwrap();
        let za = PauliString::parse("Z_a", &qs).unwrap();
        assert!(xa.mul(&za).is_none());
    }

    #[test]
    fn json_roundtrip_and_parse_errors() {
        let g = parity_generators(&ParityLayout::all_pairs(3).unwrap());
        let j = serde_json::to_string(&StabilizerJson::from(&g)).unwrap();
        let back: StabilizerJson = serde_json::from_str(&j).unwrap();
        assert_eq!(StabilizerGroup::try_from(back).unwrap(), g);
        let qs = labels(&["1"]);
        assert!(PauliString::parse("W_1", &qs).is_err());
        assert!(PauliString::parse("Z_2", &qs).is_err());
        assert!(PauliString::parse("Z_1 X_1", &qs).is_err());
        assert_eq!(PauliString::parse("I", &qs).unwrap(), PauliString::identity(1));
    }
}
