use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::encoding::{BitString, DiagonalHamiltonian};
use crate::sim::Marginals;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub bits: BitString,
    pub x: Vec<i64>,
    pub norm2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PostProcessed {
    pub candidates: Vec<Candidate>,
    pub chosen: usize,
}

impl PostProcessed {
    pub fn best(&self) -> &Candidate {
        &self.candidates[self.chosen]
    }
}

/// `⌈log₂ n⌉`.
pub fn default_width(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// The `w` qubits whose majority outcome is least certain, lower index first on ties.
pub fn ambiguous_qubits(marginals: &Marginals, w: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..marginals.probs.len()).collect();
    order.sort_by(|&a, &b| marginals.probs[a].total_cmp(&marginals.probs[b]).then(a.cmp(&b)));
    order.truncate(w);
    order
}

/// Enumerates all assignments of the `w` most ambiguous bits around the
/// majority string, drops candidates decoding to zero and picks the shortest;
/// near-equal norms (relative 1e-9) go to the lexicographically smaller string.
pub fn post_process(marginals: &Marginals, h: &DiagonalHamiltonian, w: usize) -> Result<PostProcessed, OracleError> {
    let n = h.num_qubits();
    if marginals.bits.len() != n {
        return Err(OracleError::InvalidConfig(format!(
            "marginals cover {} qubits, Hamiltonian has {n}",
            marginals.bits.len()
        )));
    }
    if w > n {
        return Err(OracleError::InvalidConfig(format!("width {w} exceeds {n} qubits")));
    }
    let free = ambiguous_qubits(marginals, w);
    let mut candidates = Vec::with_capacity(1 << w);
    for assignment in 0..1usize << w {
        let mut bits = marginals.bits.clone();
        for (slot, &q) in free.iter().enumerate() {
            bits.set(q, assignment >> (w - 1 - slot) & 1 == 1);
        }
        let x = h.layout().decode(&bits)?;
        if x.iter().all(|&c| c == 0) {
            continue;
        }
        let norm2 = h.norm_sq(&x);
        candidates.push(Candidate { bits, x, norm2 });
    }
    let mut chosen: Option<usize> = None;
    for (i, c) in candidates.iter().enumerate() {
        chosen = match chosen {
            None => Some(i),
            Some(b) => {
                let best = &candidates[b];
                let tol = 1e-9 * best.norm2.abs().max(1.0);
                let better = c.norm2 < best.norm2 - tol || ((c.norm2 - best.norm2).abs() <= tol && c.bits < best.bits);
                Some(if better { i } else { b })
            }
        };
    }
    let chosen = chosen.ok_or(OracleError::AllCandidatesZero)?;
    Ok(PostProcessed { candidates, chosen })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::QubitLayout;
    use crate::lattice::Basis;
    use crate::sim::StateVector;

    fn h(rows: &[Vec<i64>], q: usize) -> DiagonalHamiltonian {
        let b = Basis::from_integers(rows).unwrap();
        DiagonalHamiltonian::from_block(&b, QubitLayout::uniform(b.rank(), q).unwrap()).unwrap()
    }

    #[test]
    fn widths() {
        assert_eq!(default_width(1), 0);
        assert_eq!(default_width(2), 1);
        assert_eq!(default_width(4), 2);
        assert_eq!(default_width(5), 3);
        assert_eq!(default_width(6), 3);
    }

    #[test]
    fn four_candidates_at_width_two() {
        let h = h(&[vec![1, 0], vec![0, 1]], 2);
        let m = Marginals {
            bits: "0000".parse().unwrap(),
            probs: vec![0.9, 0.6, 0.55, 0.99],
        };
        assert_eq!(ambiguous_qubits(&m, 2), vec![2, 1]);
        let pp = post_process(&m, &h, 2).unwrap();
        // none of the four decodes to zero here (zero is 0101)
        assert_eq!(pp.candidates.len(), 4);
    }

    #[test]
    fn exact_first_excited_state_is_recovered() {
        let h = h(&[vec![3, 1, 0], vec![1, 4, 0], vec![0, 1, 5]], 2);
        let diag = h.diagonal();
        let ground = h.ground_bits().to_index();
        let (idx, _) = diag
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != ground)
            .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
            .unwrap();
        let bits = BitString::from_index(idx, h.num_qubits());
        let m = StateVector::basis(&bits).unwrap().marginal_probabilities();
        let pp = post_process(&m, &h, default_width(6)).unwrap();
        assert_eq!(pp.best().norm2, diag[idx]);
    }

    #[test]
    fn ties_pick_leading_qubits_and_small_strings() {
        let h = h(&[vec![1, 0], vec![0, 1]], 1);
        let m = Marginals {
            bits: "00".parse().unwrap(),
            probs: vec![0.5, 0.5],
        };
        assert_eq!(ambiguous_qubits(&m, 1), vec![0]);
        let pp = post_process(&m, &h, 1).unwrap();
        let bits: Vec<String> = pp.candidates.iter().map(|c| c.bits.to_string()).collect();
        assert_eq!(bits, vec!["00", "10"]);
        // (1,1) has norm 2, (0,1) has norm 1
        assert_eq!(pp.best().x, vec![0, 1]);

        let pp = post_process(&m, &h, 2).unwrap();
        // 01 → (1,0) and 10 → (0,1) tie at 1; 01 wins lexicographically
        assert_eq!(pp.best().bits.to_string(), "01");
    }

    #[test]
    fn all_zero_is_an_error() {
        let h = h(&[vec![1, 0], vec![0, 1]], 1);
        let m = Marginals {
            bits: "11".parse().unwrap(),
            probs: vec![1.0, 1.0],
        };
        assert!(matches!(post_process(&m, &h, 0), Err(OracleError::AllCandidatesZero)));
        assert!(post_process(&m, &h, 3).is_err());
    }
}
