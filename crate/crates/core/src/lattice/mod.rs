//! Lattice bases, Gram–Schmidt orthogonalization, projections and δ-LLL.
//!
//! Basis vectors are stored as rows of `f64`. Integral input stays exact as
//! long as entries stay below 2^53, which every operation here preserves
//! (size reduction and swaps only form small integer combinations).

mod basis;
mod gso;
mod io;
mod lll;
mod unimodular;

pub use basis::{lattice_vector, Basis};
pub use gso::{gram_schmidt, project_block, Gso};
pub use io::{read_basis, write_basis};
pub use lll::{is_lll_reduced, is_size_reduced, lll_reduce, lll_reduce_with, size_reduce, LllMode};
pub use unimodular::{change_of_basis, determinant, is_unimodular};

use thiserror::Error;

/// Relative threshold below which a Gram–Schmidt vector counts as zero.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// Tolerance used when checking reducedness conditions.
pub const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("basis is degenerate: Gram-Schmidt vector {index} vanishes")]
    DegenerateBasis { index: usize },
    #[error("block [{start}, {end}) is out of range for rank {rank}")]
    IndexOutOfRange { start: usize, end: usize, rank: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("LLL parameter delta = {0} is outside (0.25, 1)")]
    InvalidDelta(f64),
    #[error("basis has no vectors")]
    Empty,
    #[error("basis is not integral")]
    NotIntegral,
    #[error("malformed lattice file: {0}")]
    Parse(String),
}

pub(crate) fn check_delta(delta: f64) -> Result<(), LatticeError> {
    if delta > 0.25 && delta < 1.0 {
        Ok(())
    } else {
        Err(LatticeError::InvalidDelta(delta))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}
