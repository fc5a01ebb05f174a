//! Encoding of an SVP instance on a (projected) block as a diagonal qubit
//! Hamiltonian.
//!
//! Coordinate `x_i` of a lattice vector `Σ x_i b̂_i` is represented by a
//! block of `q_i` qubits through the operator
//! `Q_i = ½(Σ_s 2^{s-1} Z_s + I)`, whose spectrum is the integer range
//! `[-2^{q_i-1}+1, 2^{q_i-1}]`. The Hamiltonian `H = Σ G_{ls} Q_l Q_s`,
//! with `G` the Gram matrix of the block, is diagonal in the computational
//! basis and its eigenvalue on a basis state is the squared norm of the
//! decoded lattice vector.
//!
//! Bit conventions: measurement outcome `0` is the `Z = +1` eigenstate, and
//! within a coordinate block the first qubit carries weight `2^0`. Bitstrings
//! are written qubit 0 first, and qubit 0 is the most significant bit of a
//! statevector index.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{Basis, Gso, LatticeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodingError {
    #[error("bitstring has {found} bits, layout needs {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid bitstring character `{0}`")]
    BadBit(char),
    #[error("Gram matrix is {found}x{found}, layout has {expected} coordinates")]
    GramMismatch { expected: usize, found: usize },
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("layout needs at least one coordinate with at least one qubit")]
    EmptyLayout,
    #[error("block size must be at least 2, got {0}")]
    BlockTooSmall(usize),
    #[error("LLL parameter delta = {0} is outside (0.25, 1)")]
    InvalidDelta(f64),
    #[error("bad Hamiltonian record: {0}")]
    Record(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A computational-basis bitstring, qubit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        Self((0..n).map(|q| (index >> (n - 1 - q)) & 1 == 1).collect())
    }

    pub fn to_index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn get(&self, q: usize) -> bool {
        self.0[q]
    }

    pub fn set(&mut self, q: usize, value: bool) {
        self.0[q] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = EncodingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(EncodingError::BadBit(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Per-coordinate qubit counts and their placement in the register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitLayout {
    qubits: Vec<usize>,
    offsets: Vec<usize>,
    total: usize,
}

impl QubitLayout {
    pub fn from_counts(qubits: Vec<usize>) -> Result<Self, EncodingError> {
        if qubits.is_empty() || qubits.contains(&0) {
            return Err(EncodingError::EmptyLayout);
        }
        let mut offsets = Vec::with_capacity(qubits.len());
        let mut total = 0;
        for &q in &qubits {
            offsets.push(total);
            total += q;
        }
        Ok(Self {
            qubits,
            offsets,
            total,
        })
    }

    /// The same `q` qubits for each of `block_size` coordinates.
    pub fn uniform(block_size: usize, q: usize) -> Result<Self, EncodingError> {
        Self::from_counts(vec![q; block_size])
    }

    /// `q_i = ⌊log₂ R_i⌋ + 1` per coordinate; bounds below 1 get a single qubit.
    pub fn adaptive(bounds: &[f64]) -> Result<Self, EncodingError> {
        let counts = bounds
            .iter()
            .map(|&r| {
                // an exact power of two must not land just below itself
                let r = r * (1.0 + 1e-12);
                if r < 1.0 {
                    1
                } else {
                    r.log2().floor() as usize + 1
                }
            })
            .collect();
        Self::from_counts(counts)
    }

    pub fn num_qubits(&self) -> usize {
        self.total
    }

    pub fn block_size(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    /// Register positions of the qubits encoding coordinate `i`.
    pub fn positions(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.qubits[i]
    }

    /// Inclusive decodable range of coordinate `i`.
    pub fn range(&self, i: usize) -> (i64, i64) {
        let half = 1i64 << (self.qubits[i] - 1);
        (-half + 1, half)
    }

    fn check_len(&self, found: usize) -> Result<(), EncodingError> {
        if found == self.total {
            Ok(())
        } else {
            Err(EncodingError::LengthMismatch {
                expected: self.total,
                found,
            })
        }
    }

    pub fn decode(&self, bits: &BitString) -> Result<Vec<i64>, EncodingError> {
        self.check_len(bits.len())?;
        Ok((0..self.block_size())
            .map(|i| {
                let weight: i64 = self
                    .positions(i)
                    .enumerate()
                    .map(|(s, p)| (bits.get(p) as i64) << s)
                    .sum();
                (1i64 << (self.qubits[i] - 1)) - weight
            })
            .collect())
    }

    /// Decodes the basis state with statevector index `index`.
    pub fn decode_index(&self, index: usize) -> Vec<i64> {
        let n = self.total;
        (0..self.block_size())
            .map(|i| {
                let weight: i64 = self
                    .positions(i)
                    .enumerate()
                    .map(|(s, p)| (((index >> (n - 1 - p)) & 1) as i64) << s)
                    .sum();
                (1i64 << (self.qubits[i] - 1)) - weight
            })
            .collect()
    }

    /// Inverse of [`decode`](Self::decode); `None` if a coordinate is out of range.
    pub fn encode(&self, x: &[i64]) -> Option<BitString> {
        if x.len() != self.block_size() {
            return None;
        }
        let mut bits = BitString::zeros(self.total);
        for (i, &xi) in x.iter().enumerate() {
            let (lo, hi) = self.range(i);
            if xi < lo || xi > hi {
                return None;
            }
            let weight = (1i64 << (self.qubits[i] - 1)) - xi;
            for (s, p) in self.positions(i).enumerate() {
                bits.set(p, (weight >> s) & 1 == 1);
            }
        }
        Some(bits)
    }

    /// The all-coordinates-zero bitstring: `0…01` in every block.
    pub fn encode_zero(&self) -> BitString {
        let mut bits = BitString::zeros(self.total);
        for i in 0..self.block_size() {
            bits.set(self.positions(i).end - 1, true);
        }
        bits
    }
}

/// `R_i = ‖b*_start‖ / ‖b*_i‖` for `i` in `start..end`.
pub fn coordinate_bounds(gso: &Gso, start: usize, end: usize) -> Result<Vec<f64>, EncodingError> {
    if start >= end || end > gso.rank() {
        return Err(LatticeError::IndexOutOfRange {
            start,
            end,
            rank: gso.rank(),
        }
        .into());
    }
    let lead = gso.norm(start);
    (start..end)
        .map(|i| {
            let n = gso.norm(i);
            if n <= crate::lattice::ZERO_TOLERANCE || lead <= crate::lattice::ZERO_TOLERANCE {
                Err(LatticeError::DegenerateBasis { index: i }.into())
            } else if i == start {
                Ok(1.0)
            } else {
                Ok(lead / n)
            }
        })
        .collect()
}

/// Qubits needed for a block of size `beta` of a δ-LLL-reduced basis:
/// `β + ⌊-¼β(β-1)·log₂(δ-¼)⌋`, which is `⌊(β²+3β)/4⌋` at δ = 3/4.
pub fn qubit_upper_bound(beta: usize, delta: f64) -> Result<usize, EncodingError> {
    if beta < 2 {
        return Err(EncodingError::BlockTooSmall(beta));
    }
    if !(delta > 0.25 && delta < 1.0) {
        return Err(EncodingError::InvalidDelta(delta));
    }
    let b = beta as f64;
    let extra = (-0.25 * b * (b - 1.0) * (delta - 0.25).log2()).floor();
    Ok(beta + extra as usize)
}

/// One term of the Pauli-Z expansion: `coefficient · Π_{q ∈ qubits} Z_q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PauliTerm {
    pub qubits: Vec<usize>,
    pub coefficient: f64,
}

impl PauliTerm {
    pub fn evaluate(&self, bits: &BitString) -> f64 {
        let flips = self.qubits.iter().filter(|&&q| bits.get(q)).count();
        if flips % 2 == 0 {
            self.coefficient
        } else {
            -self.coefficient
        }
    }
}

/// `H = Σ G_{ls} Q_l Q_s`, diagonal in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalHamiltonian {
    gram: Vec<Vec<f64>>,
    layout: QubitLayout,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianRecord {
    gram: Vec<Vec<f64>>,
    qubits: Vec<usize>,
}

impl DiagonalHamiltonian {
    pub fn new(gram: Vec<Vec<f64>>, layout: QubitLayout) -> Result<Self, EncodingError> {
        let b = layout.block_size();
        if gram.len() != b || gram.iter().any(|r| r.len() != b) {
            return Err(EncodingError::GramMismatch {
                expected: b,
                found: gram.len(),
            });
        }
        for l in 0..b {
            for s in 0..l {
                let tol = 1e-9 * gram[l][s].abs().max(gram[l][l].abs()).max(1.0);
                if (gram[l][s] - gram[s][l]).abs() > tol {
                    return Err(EncodingError::NotSymmetric);
                }
            }
        }
        Ok(Self { gram, layout })
    }

    pub fn from_block(block: &Basis, layout: QubitLayout) -> Result<Self, EncodingError> {
        Self::new(block.gram(), layout)
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.num_qubits()
    }

    pub fn ground_bits(&self) -> BitString {
        self.layout.encode_zero()
    }

    /// `xᵀ G x`.
    pub fn norm_sq(&self, x: &[i64]) -> f64 {
        let mut e = 0.0;
        for (l, &xl) in x.iter().enumerate() {
            if xl == 0 {
                continue;
            }
            for (s, &xs) in x.iter().enumerate() {
                e += (xl * xs) as f64 * self.gram[l][s];
            }
        }
        e.max(0.0)
    }

    pub fn energy(&self, bits: &BitString) -> Result<f64, EncodingError> {
        Ok(self.norm_sq(&self.layout.decode(bits)?))
    }

    /// Energies of all `2^n` basis states, indexed like a statevector.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..1usize << self.num_qubits())
            .map(|idx| self.norm_sq(&self.layout.decode_index(idx)))
            .collect()
    }

    /// Expansion into identity, single-Z and ZZ terms, sorted by support.
    pub fn pauli_terms(&self) -> Vec<PauliTerm> {
        let mut acc: BTreeMap<(usize, Vec<usize>), f64> = BTreeMap::new();
        let mut add = |mut qs: Vec<usize>, c: f64| {
            qs.sort_unstable();
            if qs.len() == 2 && qs[0] == qs[1] {
                qs.clear();
            }
            *acc.entry((qs.len(), qs)).or_insert(0.0) += c;
        };
        let b = self.layout.block_size();
        for l in 0..b {
            for s in 0..b {
                let g = self.gram[l][s];
                // Q_l Q_s = ¼ (I + Σ_a w_a Z_a)(I + Σ_c w_c Z_c)
                let quarter = 0.25 * g;
                add(vec![], quarter);
                for (sa, a) in self.layout.positions(l).enumerate() {
                    add(vec![a], quarter * (1u64 << sa) as f64);
                }
                for (sc, c) in self.layout.positions(s).enumerate() {
                    add(vec![c], quarter * (1u64 << sc) as f64);
                }
                for (sa, a) in self.layout.positions(l).enumerate() {
                    for (sc, c) in self.layout.positions(s).enumerate() {
                        add(vec![a, c], quarter * (1u64 << (sa + sc)) as f64);
                    }
                }
            }
        }
        acc.into_iter()
            .map(|((_, qubits), coefficient)| PauliTerm {
                qubits,
                coefficient,
            })
            .collect()
    }

    /// Qubit pairs carrying a nonzero ZZ coefficient.
    pub fn coupled_pairs(&self) -> Vec<(usize, usize)> {
        self.pauli_terms()
            .into_iter()
            .filter(|t| t.qubits.len() == 2 && t.coefficient != 0.0)
            .map(|t| (t.qubits[0], t.qubits[1]))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(HamiltonianRecord {
            gram: self.gram.clone(),
            qubits: self.layout.qubits().to_vec(),
        })
        .expect("plain numeric record")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self, EncodingError> {
        let rec: HamiltonianRecord = serde_json::from_value(value.clone())
            .map_err(|e| EncodingError::Record(e.to_string()))?;
        Self::new(rec.gram, QubitLayout::from_counts(rec.qubits)?)
    }
}

/// Energy of a uniformly random non-ground basis state.
///
/// Every such state decodes to a nonzero coordinate vector, so the result is
/// at least the first excited energy and is a valid overlap penalty.
pub fn gamma_estimate<R: Rng + ?Sized>(h: &DiagonalHamiltonian, rng: &mut R) -> f64 {
    let n = h.num_qubits();
    let ground = h.ground_bits().to_index();
    let mut idx = rng.random_range(0..(1usize << n) - 1);
    if idx >= ground {
        idx += 1;
    }
    h.norm_sq(&h.layout().decode_index(idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn identity_h(b: usize, q: usize) -> DiagonalHamiltonian {
        DiagonalHamiltonian::from_block(&Basis::identity(b), QubitLayout::uniform(b, q).unwrap())
            .unwrap()
    }

    #[test]
    fn decode_examples() {
        let l = QubitLayout::uniform(1, 2).unwrap();
        assert_eq!(l.decode(&bits("01")).unwrap(), vec![0]);
        assert_eq!(l.decode(&bits("00")).unwrap(), vec![2]);
        assert_eq!(l.decode(&bits("11")).unwrap(), vec![-1]);
        assert_eq!(l.decode(&bits("10")).unwrap(), vec![1]);
        assert!(matches!(
            l.decode(&bits("011")),
            Err(EncodingError::LengthMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn zero_encoding() {
        let l = QubitLayout::uniform(3, 2).unwrap();
        assert_eq!(l.encode_zero().to_string(), "010101");
        assert_eq!(l.decode(&l.encode_zero()).unwrap(), vec![0, 0, 0]);
        let single = QubitLayout::uniform(1, 1).unwrap();
        assert_eq!(single.encode_zero().to_string(), "1");
        let mixed = QubitLayout::from_counts(vec![1, 3, 2]).unwrap();
        assert_eq!(mixed.encode_zero().count_ones(), 3);
        assert_eq!(mixed.decode(&mixed.encode_zero()).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn layouts() {
        let a = QubitLayout::adaptive(&[1.0, 2.0, 4.0]).unwrap();
        assert_eq!(a.qubits(), &[1, 2, 3]);
        assert_eq!(a.num_qubits(), 6);
        assert_eq!(QubitLayout::adaptive(&[1.0, 1.0]).unwrap().qubits(), &[1, 1]);
        assert_eq!(QubitLayout::adaptive(&[1.0, 2.5]).unwrap().qubits(), &[1, 2]);
        assert_eq!(QubitLayout::uniform(3, 2).unwrap().num_qubits(), 6);
        assert!(QubitLayout::from_counts(vec![2, 0]).is_err());
    }

    #[test]
    fn bounds_from_gso() {
        let gso = Gso {
            bstar: vec![vec![2.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.5]],
            mu: vec![vec![0.0; 3]; 3],
            norms_sq: vec![4.0, 1.0, 0.25],
        };
        assert_eq!(coordinate_bounds(&gso, 0, 3).unwrap(), vec![1.0, 2.0, 4.0]);
        assert_eq!(coordinate_bounds(&gso, 1, 3).unwrap(), vec![1.0, 2.0]);
        let id = crate::lattice::gram_schmidt(&Basis::identity(4)).unwrap();
        assert!(coordinate_bounds(&id, 0, 4).unwrap().iter().all(|&r| r == 1.0));
        assert!(coordinate_bounds(&id, 2, 5).is_err());
    }

    #[test]
    fn qubit_bound_closed_form() {
        assert_eq!(qubit_upper_bound(3, 0.75).unwrap(), 4);
        assert_eq!(qubit_upper_bound(4, 0.75).unwrap(), 7);
        assert_eq!(qubit_upper_bound(5, 0.75).unwrap(), 10);
        for beta in 2..60 {
            assert_eq!(qubit_upper_bound(beta, 0.75).unwrap(), (beta * beta + 3 * beta) / 4);
        }
        assert!(qubit_upper_bound(1, 0.75).is_err());
        assert!(qubit_upper_bound(3, 0.2).is_err());
        // smaller delta admits less reduced blocks
        assert!(qubit_upper_bound(4, 0.5).unwrap() > qubit_upper_bound(4, 0.99).unwrap());
    }

    #[test]
    fn energy_examples() {
        let h = identity_h(2, 1);
        assert_eq!(h.energy(&bits("00")).unwrap(), 2.0);
        assert_eq!(h.energy(&bits("10")).unwrap(), 1.0);
        assert_eq!(h.energy(&h.ground_bits()).unwrap(), 0.0);
        assert!(h.energy(&bits("0")).is_err());
    }

    #[test]
    fn single_qubit_pauli_expansion() {
        let h = identity_h(1, 1);
        let terms = h.pauli_terms();
        assert_eq!(
            terms,
            vec![
                PauliTerm { qubits: vec![], coefficient: 0.5 },
                PauliTerm { qubits: vec![0], coefficient: 0.5 },
            ]
        );
        let zero = DiagonalHamiltonian::new(vec![vec![0.0; 2]; 2], QubitLayout::uniform(2, 2).unwrap())
            .unwrap();
        assert!(zero.pauli_terms().iter().all(|t| t.coefficient == 0.0));
        assert!(zero.coupled_pairs().is_empty());
    }

    #[test]
    fn gamma_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = identity_h(2, 1);
        for _ in 0..50 {
            let g = gamma_estimate(&h, &mut rng);
            assert!(g == 1.0 || g == 2.0);
        }
        let h4 = DiagonalHamiltonian::new(vec![vec![4.0]], QubitLayout::uniform(1, 1).unwrap()).unwrap();
        assert_eq!(gamma_estimate(&h4, &mut rng), 4.0);
    }

    #[test]
    fn json_record() {
        let h = identity_h(2, 2);
        let v = h.to_json();
        assert_eq!(v["qubits"], serde_json::json!([2, 2]));
        assert_eq!(DiagonalHamiltonian::from_json(&v).unwrap(), h);
    }

    #[test]
    fn asymmetric_gram_rejected() {
        let l = QubitLayout::uniform(2, 1).unwrap();
        assert_eq!(
            DiagonalHamiltonian::new(vec![vec![1.0, 2.0], vec![0.0, 1.0]], l),
            Err(EncodingError::NotSymmetric)
        );
    }

    proptest! {
        #[test]
        fn spectrum_is_exact_range(q in 1usize..7) {
            let l = QubitLayout::uniform(1, q).unwrap();
            let mut seen: Vec<i64> = (0..1usize << q).map(|i| l.decode_index(i)[0]).collect();
            seen.sort_unstable();
            let (lo, hi) = l.range(0);
            prop_assert_eq!(seen, (lo..=hi).collect::<Vec<_>>());
        }

        #[test]
        fn encode_inverts_decode(counts in prop::collection::vec(1usize..4, 1..4), seed in any::<u64>()) {
            let l = QubitLayout::from_counts(counts).unwrap();
            let idx = (seed as usize) % (1 << l.num_qubits());
            let b = BitString::from_index(idx, l.num_qubits());
            let x = l.decode(&b).unwrap();
            prop_assert_eq!(&x, &l.decode_index(idx));
            prop_assert_eq!(l.encode(&x).unwrap(), b);
        }
    }
}
