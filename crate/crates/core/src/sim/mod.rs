//! Dense statevector simulation of parameterized circuits.
//!
//! Qubit 0 is the most significant bit of an amplitude index, so the
//! amplitude at index `i` belongs to the bitstring spelling `i` in binary.

mod ansatz;
mod circuit;
mod gradient;
mod state;

pub use ansatz::{build_he_ansatz, build_svp_ansatz, Coupling};
pub use circuit::{Circuit, Gate};
pub use gradient::{expectation, expectation_and_gradient, parameter_shift_gradient, GradientMethod};
pub use state::{Marginals, StateVector};

use std::sync::OnceLock;

use thiserror::Error;

/// Default register cap; `VQKZ_MAX_QUBITS` overrides it.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// The simulator's qubit cap, read once from `VQKZ_MAX_QUBITS`.
pub fn max_qubits() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("VQKZ_MAX_QUBITS")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&n: &usize| (1..=40).contains(&n))
            .unwrap_or(DEFAULT_MAX_QUBITS)
    })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{n} qubits exceeds the simulator cap of {cap}")]
    TooManyQubits { n: usize, cap: usize },
    #[error("a register needs at least one qubit")]
    NoQubits,
    #[error("circuit takes {expected} parameters, got {found}")]
    ParamCountMismatch { expected: usize, found: usize },
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("two-qubit gate needs distinct qubits, got {0} twice")]
    RepeatedQubit(usize),
    #[error("parameter slot {slot} skips past the next free slot {next}")]
    SlotGap { slot: usize, next: usize },
    #[error("layer count must be at least 1")]
    InvalidLayerCount,
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
}
