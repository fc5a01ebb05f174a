//! Variational quantum Korkin–Zolotarev lattice reduction.
//!
//! The crate is organized bottom-up:
//!
//! * [`lattice`]: bases, Gram–Schmidt, projected blocks, δ-LLL.
//! * [`encoding`]: the SVP-on-a-block to diagonal qubit Hamiltonian map.
//! * [`sim`]: dense statevector simulation and the two ansatz families.
//! * [`oracle`]: the excited-state VQE oracle with classical post-processing.
//! * [`reduction`]: the block tour loop plus exact enumeration and BKZ checks.
//! * [`experiments`]: instance generators, metrics and the CSV runner.
//!
//! [`seed`] holds the seed-derivation helpers every randomized step goes through.

pub mod encoding;
pub mod experiments;
pub mod lattice;
pub mod oracle;
pub mod reduction;
pub mod seed;
pub mod sim;

pub use lattice::{Basis, Gso, LatticeError};
