use serde::{Deserialize, Serialize};

use super::{Circuit, Gate, SimError};
use crate::encoding::DiagonalHamiltonian;

/// Which qubit pairs receive a controlled-Rz entangler.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coupling {
    /// Every pair with a nonzero ZZ coefficient in the Hamiltonian.
    #[default]
    Hamiltonian,
    /// Nearest neighbours `(i, i+1)`.
    Chain,
}

/// Hadamard layer, then `layers` repetitions of Rx on every qubit, Rz on
/// every qubit and one CRz per coupled pair (lower index controls). Every
/// rotation has its own parameter.
pub fn build_svp_ansatz(
    h: &DiagonalHamiltonian,
    layers: usize,
    coupling: Coupling,
) -> Result<Circuit, SimError> {
    if layers == 0 {
        return Err(SimError::InvalidLayerCount);
    }
    let n = h.num_qubits();
    let pairs = match coupling {
        Coupling::Hamiltonian => h.coupled_pairs(),
        Coupling::Chain => (1..n).map(|i| (i - 1, i)).collect(),
    };
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::H(q))?;
    }
    for _ in 0..layers {
        for qubit in 0..n {
            c.push(Gate::Rx { qubit, slot: c.next_slot() })?;
        }
        for qubit in 0..n {
            c.push(Gate::Rz { qubit, slot: c.next_slot() })?;
        }
        for &(control, target) in &pairs {
            c.push(Gate::Crz { control, target, slot: c.next_slot() })?;
        }
    }
    Ok(c)
}

/// Hardware-efficient circuit: `layers` blocks of Ry and Rz on every qubit
/// followed by a CX chain, closed by one more Ry/Rz layer. That is
/// `2n(L+1)` parameters and `L(n-1)` entanglers.
pub fn build_he_ansatz(n: usize, layers: usize) -> Result<Circuit, SimError> {
    if layers == 0 {
        return Err(SimError::InvalidLayerCount);
    }
    if n == 0 {
        return Err(SimError::NoQubits);
    }
    let mut c = Circuit::new(n);
    let rotations = |c: &mut Circuit| -> Result<(), SimError> {
        for qubit in 0..n {
            c.push(Gate::Ry { qubit, slot: c.next_slot() })?;
            c.push(Gate::Rz { qubit, slot: c.next_slot() })?;
        }
        Ok(())
    };
    for _ in 0..layers {
        rotations(&mut c)?;
        for q in 1..n {
            c.push(Gate::Cx { control: q - 1, target: q })?;
        }
    }
    rotations(&mut c)?;
    Ok(c)
}
