//! Dense statevector simulation over labelled qubits.
//!
//! Amplitude index bits follow label order: the first label is the most
//! significant bit. Rotations use `R_P(θ) = exp(-iθP/2)` throughout.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::layout::{Circuit, Gate};
use crate::pauli::{Pauli, PauliString};

pub const DEFAULT_QUBIT_CAP: usize = 16;
pub const NORM_TOLERANCE: f64 = 1e-12;
pub const ZERO_PROBABILITY: f64 = 1e-12;
const PURITY_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

type Mat2 = [[Complex64; 2]; 2];

/// Unit 3-vector selecting the observable `a · σ` for a projective measurement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Axis(pub [f64; 3]);

impl Axis {
    pub const X: Axis = Axis([1.0, 0.0, 0.0]);
    pub const Y: Axis = Axis([0.0, 1.0, 0.0]);
    pub const Z: Axis = Axis([0.0, 0.0, 1.0]);

    /// YZ-plane axis `(0, sin θ, cos θ)`. Its `+1` projector is
    /// `R_X(-θ)|0⟩⟨0|R_X(θ)`, i.e. the post-selection `⟨0|R_X(θ)`.
    pub fn yz(theta: f64) -> Axis {
        Axis([0.0, theta.sin(), theta.cos()])
    }

    fn projector(self, outcome: Outcome) -> Mat2 {
        let [x, y, z] = self.0;
        let s = outcome.value() as f64;
        let h = 0.5;
        [
            [Complex64::new(h * (1.0 + s * z), 0.0), Complex64::new(h * s * x, -h * s * y)],
            [Complex64::new(h * s * x, h * s * y), Complex64::new(h * (1.0 - s * z), 0.0)],
        ]
    }

    fn is_unit(self) -> bool {
        let [x, y, z] = self.0;
        ((x * x + y * y + z * z) - 1.0).abs() < 1e-9
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn value(self) -> i8 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Outcome::Minus
        } else {
            Outcome::Plus
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.value())
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            v => Err(serde::de::Error::custom(format!("outcome must be +1 or -1, got {v}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementEntry {
    pub qubit: String,
    pub axis: Axis,
    pub outcome: Outcome,
    pub probability: f64,
}

/// Measurements in execution order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasurementRecord(pub Vec<MeasurementEntry>);

impl MeasurementRecord {
    pub fn entries(&self) -> &[MeasurementEntry] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn outcomes(&self) -> Vec<Outcome> {
        self.0.iter().map(|e| e.outcome).collect()
    }
}

/// Where measurement results come from.
pub trait OutcomeSource {
    /// Picks the outcome for `qubit`, whose `+1` branch has probability `p_plus`.
    fn next_outcome(&mut self, qubit: &str, p_plus: f64) -> Result<Outcome>;
}

/// Always reports `+1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct AlwaysPlus;

impl OutcomeSource for AlwaysPlus {
    fn next_outcome(&mut self, _: &str, _: f64) -> Result<Outcome> {
        Ok(Outcome::Plus)
    }
}

/// A fixed outcome list consumed in measurement order.
#[derive(Clone, Debug)]
pub struct Prescribed {
    outcomes: Vec<Outcome>,
    next: usize,
}

impl Prescribed {
    pub fn new(outcomes: Vec<Outcome>) -> Self {
        Self { outcomes, next: 0 }
    }

    /// Branch `index` of `count` measurements: bit `k` (from the most
    /// significant end) set means outcome `-1` for the `k`-th measurement.
    pub fn branch(index: u64, count: usize) -> Self {
        Self::new((0..count).map(|k| Outcome::from_bit(index >> (count - 1 - k) & 1 == 1)).collect())
    }

    pub fn remaining(&self) -> usize {
        self.outcomes.len() - self.next
    }
}

impl OutcomeSource for Prescribed {
    fn next_outcome(&mut self, _: &str, _: f64) -> Result<Outcome> {
        let o = *self.outcomes.get(self.next).ok_or(Error::OutcomesExhausted)?;
        self.next += 1;
        Ok(o)
    }
}

/// Born-rule sampling from a seeded generator.
#[derive(Clone, Debug)]
pub struct Sampled(pub ChaCha8Rng);

impl Sampled {
    pub fn seeded(seed: u64) -> Self {
        use rand::SeedableRng;
        Self(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl OutcomeSource for Sampled {
    fn next_outcome(&mut self, _: &str, p_plus: f64) -> Result<Outcome> {
        Ok(if self.0.gen::<f64>() < p_plus { Outcome::Plus } else { Outcome::Minus })
    }
}

impl<S: OutcomeSource + ?Sized> OutcomeSource for &mut S {
    fn next_outcome(&mut self, qubit: &str, p_plus: f64) -> Result<Outcome> {
        (**self).next_outcome(qubit, p_plus)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    labels: Vec<String>,
    amps: Vec<Complex64>,
    cap: usize,
}

impl Statevector {
    /// `|0...0⟩` on the given labels.
    pub fn zero(labels: Vec<String>) -> Result<Self> {
        Self::zero_with_cap(labels, DEFAULT_QUBIT_CAP)
    }

    pub fn zero_with_cap(labels: Vec<String>, cap: usize) -> Result<Self> {
        check_labels(&labels, cap)?;
        let mut amps = vec![ZERO; 1 << labels.len()];
        amps[0] = ONE;
        Ok(Self { labels, amps, cap })
    }

    /// Computational basis state; `bits[k]` is the value of `labels[k]`.
    pub fn basis(labels: Vec<String>, bits: &[bool]) -> Result<Self> {
        let mut s = Self::zero(labels)?;
        if bits.len() != s.labels.len() {
            return Err(Error::LabelMismatch("basis bit count differs from label count".into()));
        }
        let idx = bits.iter().fold(0usize, |acc, &b| acc << 1 | usize::from(b));
        s.amps[0] = ZERO;
        s.amps[idx] = ONE;
        Ok(s)
    }

    /// Accepts amplitudes whose squared norm is within `1e-6` of one and
    /// renormalises them.
    pub fn from_amplitudes(labels: Vec<String>, amps: Vec<Complex64>) -> Result<Self> {
        check_labels(&labels, DEFAULT_QUBIT_CAP.max(labels.len()))?;
        let expected = 1usize << labels.len();
        if amps.len() != expected {
            return Err(Error::AmplitudeLength { len: amps.len(), expected });
        }
        let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalised(norm));
        }
        let scale = norm.sqrt().recip();
        let amps = amps.into_iter().map(|a| a * scale).collect();
        Ok(Self { labels, amps, cap: DEFAULT_QUBIT_CAP })
    }

    /// Random state with independent complex Gaussian amplitudes, normalised
    /// (Haar-distributed).
    pub fn random<R: Rng + ?Sized>(labels: Vec<String>, rng: &mut R) -> Result<Self> {
        let mut s = Self::zero(labels)?;
        for a in s.amps.iter_mut() {
            *a = Complex64::new(gaussian(rng), gaussian(rng));
        }
        s.renormalise();
        Ok(s)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn qubit_count(&self) -> usize {
        self.labels.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn with_cap(mut self, cap: usize) -> Result<Self> {
        check_labels(&self.labels, cap)?;
        self.cap = cap;
        Ok(self)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn contains(&self, q: &str) -> bool {
        self.labels.iter().any(|l| l == q)
    }

    fn position(&self, q: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == q).ok_or_else(|| Error::UnknownQubit(q.to_string()))
    }

    fn mask(&self, q: &str) -> Result<usize> {
        Ok(1 << (self.labels.len() - 1 - self.position(q)?))
    }

    fn renormalise(&mut self) {
        let scale = self.norm_sqr().sqrt().recip();
        for a in self.amps.iter_mut() {
            *a *= scale;
        }
    }

    fn apply_single(&mut self, mask: usize, m: &Mat2) {
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Applies one gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::Cnot(c, t) => {
                let (cm, tm) = (self.mask(c)?, self.mask(t)?);
                if cm == tm {
                    return Err(Error::LabelMismatch(format!("CNOT control equals target {c}")));
                }
                for i in 0..self.amps.len() {
                    if i & cm != 0 && i & tm == 0 {
                        self.amps.swap(i, i | tm);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let (am, bm) = (self.mask(a)?, self.mask(b)?);
                if am == bm {
                    return Err(Error::LabelMismatch(format!("CZ on a single qubit {a}")));
                }
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & am != 0 && i & bm != 0 {
                        *amp = -*amp;
                    }
                }
            }
            Gate::H(q) => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let m = [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]];
                self.apply_single(self.mask(q)?, &m);
            }
            Gate::X(q) => {
                let mask = self.mask(q)?;
                for i in 0..self.amps.len() {
                    if i & mask == 0 {
                        self.amps.swap(i, i | mask);
                    }
                }
            }
            Gate::Z(q) => {
                let mask = self.mask(q)?;
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask != 0 {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Rz(q, theta) => {
                let mask = self.mask(q)?;
                let (lo, hi) = (Complex64::from_polar(1.0, -theta / 2.0), Complex64::from_polar(1.0, theta / 2.0));
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    *amp *= if i & mask == 0 { lo } else { hi };
                }
            }
            Gate::Rx(q, theta) => {
                let (co, si) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                let m = [[c(co, 0.0), c(0.0, -si)], [c(0.0, -si), c(co, 0.0)]];
                self.apply_single(self.mask(q)?, &m);
            }
        }
        Ok(())
    }

    /// Returns the state after the whole circuit; nothing is applied if any
    /// gate names an unknown qubit.
    pub fn apply_circuit(&self, circuit: &Circuit) -> Result<Statevector> {
        for g in circuit.gates() {
            for q in g.qubits() {
                self.position(q)?;
            }
        }
        let mut out = self.clone();
        for g in circuit.gates() {
            out.apply(g)?;
        }
        Ok(out)
    }

    /// Probability of `outcome` when measuring `q` along `axis`.
    pub fn probability(&self, q: &str, axis: Axis, outcome: Outcome) -> Result<f64> {
        if !axis.is_unit() {
            return Err(Error::BadAxis);
        }
        let mask = self.mask(q)?;
        let m = axis.projector(outcome);
        let mut p = 0.0;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | mask]);
                p += (m[0][0] * a0 + m[0][1] * a1).norm_sqr() + (m[1][0] * a0 + m[1][1] * a1).norm_sqr();
            }
        }
        Ok(p)
    }

    /// Projects `q` onto the `outcome` eigenspace of `axis · σ`. The measured
    /// qubit stays in the register.
    pub fn project(&self, q: &str, axis: Axis, outcome: Outcome) -> Result<(f64, Statevector)> {
        let p = self.probability(q, axis, outcome)?;
        if p < ZERO_PROBABILITY {
            return Err(Error::ZeroProbability { qubit: q.to_string(), probability: p });
        }
        let mut out = self.clone();
        out.apply_single(self.mask(q)?, &axis.projector(outcome));
        out.renormalise();
        Ok((p, out))
    }

    /// Measures `q`, drawing the outcome from `source` and logging it.
    pub fn measure(
        &self,
        q: &str,
        axis: Axis,
        source: &mut dyn OutcomeSource,
        record: &mut MeasurementRecord,
    ) -> Result<Statevector> {
        let p_plus = self.probability(q, axis, Outcome::Plus)?;
        let outcome = source.next_outcome(q, p_plus)?;
        let (probability, out) = self.project(q, axis, outcome)?;
        record.0.push(MeasurementEntry { qubit: q.to_string(), axis, outcome, probability });
        Ok(out)
    }

    /// Removes `q`, which must be unentangled with the rest of the register.
    pub fn discard_qubit(&self, q: &str) -> Result<Statevector> {
        let pos = self.position(q)?;
        let mask = self.mask(q)?;
        let (mut a, mut d, mut b) = (0.0, 0.0, ZERO);
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let (r0, r1) = (self.amps[i], self.amps[i | mask]);
                a += r0.norm_sqr();
                d += r1.norm_sqr();
                b += r0 * r1.conj();
            }
        }
        let total = a + d;
        let purity = (a * a + d * d + 2.0 * b.norm_sqr()) / (total * total);
        if purity < 1.0 - PURITY_TOLERANCE {
            return Err(Error::EntangledQubit { qubit: q.to_string(), purity });
        }
        let pick = if a >= d { 0 } else { mask };
        let low = mask - 1;
        let amps: Vec<Complex64> = (0..self.amps.len() / 2)
            .map(|k| {
                // re-insert the removed bit position
                let i = (k & !low) << 1 | (k & low) | pick;
                self.amps[i]
            })
            .collect();
        let mut labels = self.labels.clone();
        labels.remove(pos);
        let mut out = Statevector { labels, amps, cap: self.cap };
        out.renormalise();
        Ok(out)
    }

    /// Appends a fresh qubit in `|0⟩` as the new least significant bit.
    pub fn append_zero(&self, label: &str) -> Result<Statevector> {
        if self.contains(label) {
            return Err(Error::LabelMismatch(format!("qubit {label} already present")));
        }
        let mut labels = self.labels.clone();
        labels.push(label.to_string());
        check_labels(&labels, self.cap)?;
        let mut amps = vec![ZERO; self.amps.len() * 2];
        for (i, a) in self.amps.iter().enumerate() {
            amps[i << 1] = *a;
        }
        Ok(Statevector { labels, amps, cap: self.cap })
    }

    /// Appends a fresh qubit in `|+⟩`.
    pub fn append_plus(&self, label: &str) -> Result<Statevector> {
        let mut s = self.append_zero(label)?;
        s.apply(&Gate::H(label.to_string()))?;
        Ok(s)
    }

    /// Same state with qubits listed in `order` (a permutation of the labels).
    pub fn reordered(&self, order: &[String]) -> Result<Statevector> {
        let same_set = order.len() == self.labels.len()
            && order.iter().collect::<BTreeSet<_>>() == self.labels.iter().collect::<BTreeSet<_>>();
        if !same_set {
            return Err(Error::LabelMismatch(format!("{:?} vs {:?}", self.labels, order)));
        }
        if order == self.labels.as_slice() {
            return Ok(self.clone());
        }
        let n = order.len();
        let src_bit: Vec<usize> = order.iter().map(|l| n - 1 - self.position(l).expect("same set")).collect();
        let amps = (0..self.amps.len())
            .map(|i| {
                let mut j = 0;
                for (k, &sb) in src_bit.iter().enumerate() {
                    if i >> (n - 1 - k) & 1 == 1 {
                        j |= 1 << sb;
                    }
                }
                self.amps[j]
            })
            .collect();
        Ok(Statevector { labels: order.to_vec(), amps, cap: self.cap })
    }

    /// `⟨self|other⟩`, aligning label order first.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        let other = other.reordered(&self.labels)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `⟨self| P |self⟩` for a Pauli string over `labels` (any order of this
    /// register's labels).
    pub fn expectation(&self, p: &PauliString, labels: &[String]) -> Result<f64> {
        if labels.len() != p.len() {
            return Err(Error::LabelMismatch("Pauli string length differs from label list".into()));
        }
        let mut image = self.clone();
        for (q, label) in labels.iter().enumerate() {
            match p.get(q) {
                Pauli::I => {}
                Pauli::X => image.apply(&Gate::X(label.clone()))?,
                Pauli::Z => image.apply(&Gate::Z(label.clone()))?,
                Pauli::Y => {
                    // Y = iXZ
                    image.apply(&Gate::Z(label.clone()))?;
                    image.apply(&Gate::X(label.clone()))?;
                    for a in image.amps.iter_mut() {
                        *a *= Complex64::i();
                    }
                }
            }
        }
        let v = self.inner(&image)?;
        Ok(f64::from(p.sign()) * v.re)
    }

    /// `[[re, im], ...]` in index order.
    pub fn amplitude_dump(&self) -> Vec<[f64; 2]> {
        self.amps.iter().map(|a| [a.re, a.im]).collect()
    }

    pub fn from_dump(labels: Vec<String>, dump: &[[f64; 2]]) -> Result<Self> {
        Self::from_amplitudes(labels, dump.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
    }
}

/// `sqrt(1 - |⟨a|b⟩|²)`; zero exactly for states equal up to global phase.
///
/// Evaluated as the norm of the part of `b` orthogonal to `a`, which keeps
/// full precision near zero where the direct formula loses half the digits.
pub fn distance_up_to_phase(a: &Statevector, b: &Statevector) -> Result<f64> {
    let b = b.reordered(&a.labels)?;
    let (na, nb) = (a.norm_sqr(), b.norm_sqr());
    let c = a.inner(&b)? / na;
    let perp: f64 = a.amps.iter().zip(&b.amps).map(|(x, y)| (y - c * x).norm_sqr()).sum();
    Ok((perp / nb).sqrt().min(1.0))
}

fn check_labels(labels: &[String], cap: usize) -> Result<()> {
    if labels.len() > cap {
        return Err(Error::RegisterTooLarge { n: labels.len(), cap });
    }
    let distinct: BTreeSet<&String> = labels.iter().collect();
    if distinct.len() != labels.len() {
        return Err(Error::LabelMismatch(format!("duplicate qubit labels in {labels:?}")));
    }
    Ok(())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
