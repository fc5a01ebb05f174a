use serde::{Deserialize, Serialize};

use crate::encoding::DiagonalHamiltonian;
use crate::sim::StateVector;

/// Weight of a state on one energy level of a diagonal Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelOverlap {
    /// 0 is the ground level.
    pub level: usize,
    pub energy: f64,
    pub multiplicity: usize,
    pub overlap: f64,
}

/// Overlaps with the ground level and the next `count` levels.
///
/// Eigenstates of a diagonal Hamiltonian are basis states, so a level's
/// overlap is the summed probability of its (possibly degenerate) states.
pub fn excited_state_overlaps(state: &StateVector, h: &DiagonalHamiltonian, count: usize) -> Vec<LevelOverlap> {
    let diag = h.diagonal();
    let probs = state.probabilities();
    let mut order: Vec<usize> = (0..diag.len()).collect();
    order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]).then(a.cmp(&b)));
    let mut levels: Vec<LevelOverlap> = Vec::new();
    for i in order {
        let e = diag[i];
        match levels.last_mut() {
            Some(l) if (e - l.energy).abs() <= 1e-9 * l.energy.abs().max(1.0) => {
                l.multiplicity += 1;
                l.overlap += probs[i];
            }
            _ => {
                if levels.len() == count + 1 {
                    break;
                }
                levels.push(LevelOverlap {
                    level: levels.len(),
                    energy: e,
                    multiplicity: 1,
                    overlap: probs[i],
                });
            }
        }
    }
    levels
}
