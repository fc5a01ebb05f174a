use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{max_qubits, SimError};
use crate::encoding::{BitString, DiagonalHamiltonian};

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

/// Per-qubit majority outcomes and their probabilities.
///
/// `probs[i]` is in `[0.5, 1]`; a tie (within rounding) reports outcome 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Marginals {
    pub bits: BitString,
    pub probs: Vec<f64>,
}

impl Marginals {
    /// Majority vote from the probability of reading 1 on each qubit.
    pub fn from_one_probabilities(p_one: &[f64]) -> Self {
        let mut bits = BitString::zeros(p_one.len());
        let probs = p_one
            .iter()
            .enumerate()
            .map(|(q, &p1)| {
                if p1 > 0.5 + 1e-12 {
                    bits.set(q, true);
                    p1
                } else {
                    1.0 - p1
                }
            })
            .collect();
        Self { bits, probs }
    }

    /// Empirical marginals from measurement counts.
    pub fn from_counts(counts: &BTreeMap<BitString, usize>, n: usize) -> Self {
        let total: usize = counts.values().sum();
        let mut ones = vec![0usize; n];
        for (b, &c) in counts {
            for (q, o) in ones.iter_mut().enumerate() {
                if b.get(q) {
                    *o += c;
                }
            }
        }
        let p: Vec<f64> = ones
            .iter()
            .map(|&o| if total == 0 { 0.5 } else { o as f64 / total as f64 })
            .collect();
        Self::from_one_probabilities(&p)
    }
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self, SimError> {
        if n == 0 {
            return Err(SimError::NoQubits);
        }
        let cap = max_qubits();
        if n > cap {
            return Err(SimError::TooManyQubits { n, cap });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn basis(bits: &BitString) -> Result<Self, SimError> {
        let mut s = Self::zero(bits.len())?;
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[bits.to_index()] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::SizeMismatch {
                expected: len.next_power_of_two().max(2),
                found: len,
            });
        }
        let n = len.trailing_zeros() as usize;
        let cap = max_qubits();
        if n > cap {
            return Err(SimError::TooManyQubits { n, cap });
        }
        let s = Self { n, amps };
        let norm = s.norm_sq();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub(crate) fn mask(&self, qubit: usize) -> usize {
        1 << (self.n - 1 - qubit)
    }

    /// `Σ_b |amp_b|² d_b` for a diagonal given as a dense vector.
    pub fn expectation_values(&self, diag: &[f64]) -> Result<f64, SimError> {
        if diag.len() != self.amps.len() {
            return Err(SimError::SizeMismatch {
                expected: self.amps.len(),
                found: diag.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(diag)
            .map(|(a, d)| a.norm_sqr() * d)
            .sum())
    }

    pub fn expectation_diagonal(&self, h: &DiagonalHamiltonian) -> Result<f64, SimError> {
        if h.num_qubits() != self.n {
            return Err(SimError::SizeMismatch {
                expected: self.n,
                found: h.num_qubits(),
            });
        }
        self.expectation_values(&h.diagonal())
    }

    /// `|⟨bits|ψ⟩|²`.
    pub fn overlap_with_basis_state(&self, bits: &BitString) -> Result<f64, SimError> {
        if bits.len() != self.n {
            return Err(SimError::SizeMismatch {
                expected: self.n,
                found: bits.len(),
            });
        }
        Ok(self.amps[bits.to_index()].norm_sqr())
    }

    pub fn one_probabilities(&self) -> Vec<f64> {
        (0..self.n)
            .map(|q| {
                let m = self.mask(q);
                self.amps
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i & m != 0)
                    .map(|(_, a)| a.norm_sqr())
                    .sum()
            })
            .collect()
    }

    pub fn marginal_probabilities(&self) -> Marginals {
        Marginals::from_one_probabilities(&self.one_probabilities())
    }

    /// Multinomial draw of `shots` measurements in the computational basis.
    pub fn sample<R: Rng + ?Sized>(&self, shots: usize, rng: &mut R) -> BTreeMap<BitString, usize> {
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let mut hits = vec![0usize; self.amps.len()];
        for _ in 0..shots {
            let u: f64 = rng.random::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c <= u).min(self.amps.len() - 1);
            hits[idx] += 1;
        }
        hits.into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(i, c)| (BitString::from_index(i, self.n), c))
            .collect()
    }
}
