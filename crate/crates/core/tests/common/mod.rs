//! Independent oracles for integration and acceptance tests: a raw amplitude
//! model of the logical circuit that both engines are supposed to realise,
//! plus random program generation.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64 as C;
use paritymbqc::layout::ParityLayout;
use paritymbqc::parity::{DecodeSet, LayerParams};
use paritymbqc::sim::Statevector;
use rand::Rng;

/// Amplitudes with qubit 0 as the most significant bit.
#[derive(Clone, Debug)]
pub struct Dense {
    pub n: usize,
    pub amps: Vec<C>,
}

impl Dense {
    pub fn from_state(s: &Statevector, order: &[String]) -> Dense {
        let s = s.reordered(order).unwrap();
        Dense { n: order.len(), amps: s.amplitudes().to_vec() }
    }

    pub fn to_state(&self, labels: &[String]) -> Statevector {
        Statevector::from_amplitudes(labels.to_vec(), self.amps.clone()).unwrap()
    }

    fn bit(&self, i: usize, q: usize) -> bool {
        i >> (self.n - 1 - q) & 1 == 1
    }

    pub fn apply_1q(&mut self, q: usize, m: [[C; 2]; 2]) {
        let mask = 1 << (self.n - 1 - q);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (a, b) = (self.amps[i], self.amps[i | mask]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | mask] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    /// `exp(-iθ Z_{qs}/2)` for the Pauli product over `qs`.
    pub fn z_product_rotation(&mut self, qs: &[usize], theta: f64) {
        for i in 0..self.amps.len() {
            let odd = qs.iter().filter(|&&q| self.bit(i, q)).count() % 2 == 1;
            let eig = if odd { -1.0 } else { 1.0 };
            self.amps[i] *= C::from_polar(1.0, -theta * eig / 2.0);
        }
    }

    pub fn cz(&mut self, a: usize, b: usize) {
        for i in 0..self.amps.len() {
            if self.bit(i, a) && self.bit(i, b) {
                self.amps[i] = -self.amps[i];
            }
        }
    }

    pub fn rz(&mut self, q: usize, phi: f64) {
        self.apply_1q(
            q,
            [[C::from_polar(1.0, -phi / 2.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::from_polar(1.0, phi / 2.0)]],
        );
    }

    pub fn rx(&mut self, q: usize, alpha: f64) {
        let (c, s) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
        self.apply_1q(q, [[C::new(c, 0.0), C::new(0.0, -s)], [C::new(0.0, -s), C::new(c, 0.0)]]);
    }
}

/// The logical circuit of a layered parity program: per layer, a `Z`-product
/// rotation over `S(p)` for each rotated parity qubit, then `R_Z(φ)` and
/// `R_X(α)` on each data qubit.
pub fn logical_circuit(layout: &ParityLayout, psi: &Statevector, layers: &[LayerParams]) -> Statevector {
    let data = layout.data_qubits().to_vec();
    let pos = |d: &str| data.iter().position(|x| x == d).unwrap();
    let mut s = Dense::from_state(psi, &data);
    for layer in layers {
        for (p, &theta) in &layer.theta {
            let qs: Vec<usize> = layout.parity(p).unwrap().set.iter().map(|d| pos(d)).collect();
            s.z_product_rotation(&qs, theta);
        }
        for (q, d) in data.iter().enumerate() {
            if let Some(&phi) = layer.phi.get(d) {
                s.rz(q, phi);
            }
            if let Some(&alpha) = layer.alpha.get(d) {
                s.rx(q, alpha);
            }
        }
    }
    s.to_state(&data)
}

pub fn labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn angle<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)
}

/// Random program for `layout`. With `partial`, non-final layers decode a
/// random subset and only rotate data qubits no undecoded parity qubit
/// still encodes.
pub fn random_layers<R: Rng>(layout: &ParityLayout, count: usize, partial: bool, rng: &mut R) -> Vec<LayerParams> {
    let parity = layout.parity_labels();
    (0..count)
        .map(|l| {
            let last = l + 1 == count;
            let decoded: Vec<String> = if partial && !last {
                parity.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
            } else {
                parity.clone()
            };
            let encoded: Vec<&String> = layout
                .parity_qubits()
                .iter()
                .filter(|p| !decoded.contains(&p.label))
                .flat_map(|p| p.set.iter())
                .collect();
            let theta: BTreeMap<String, f64> = decoded.iter().map(|p| (p.clone(), angle(rng))).collect();
            let alpha =
                layout.data_qubits().iter().filter(|d| !encoded.contains(d)).map(|d| (d.clone(), angle(rng))).collect();
            let phi = layout.data_qubits().iter().map(|d| (d.clone(), angle(rng))).collect();
            let decode = if decoded.len() == parity.len() { DecodeSet::All } else { DecodeSet::Subset(decoded) };
            LayerParams { theta, alpha, phi, decode }
        })
        .collect()
}

/// All orderings of `items` consistent with `before(a, b)` meaning `a` must
/// come first.
pub fn linear_extensions(items: &[String], before: &dyn Fn(&str, &str) -> bool) -> Vec<Vec<String>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (k, x) in items.iter().enumerate() {
        if items.iter().any(|y| y != x && before(y, x)) {
            continue;
        }
        let rest: Vec<String> = items.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, y)| y.clone()).collect();
        for mut tail in linear_extensions(&rest, before) {
            tail.insert(0, x.clone());
            out.push(tail);
        }
    }
    out
}
