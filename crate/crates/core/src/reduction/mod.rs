//! Block reduction: the tour loop with a pluggable SVP oracle, exact
//! enumeration, and BKZ reducedness checks.

mod bkz;
mod enumerate;
mod tour;

pub use bkz::{bkz_classical, bkz_quality_bound, is_bkz_reduced, log_potential};
pub use enumerate::{enumerate_shortest, sign_normalize, MAX_ENUM_RANK};
pub use tour::{vqkz_reduce, Action, ReductionOutcome, ReductionStatus, TourEvent, DEFAULT_MAX_TOURS};

use std::fmt::Display;

use thiserror::Error;

use crate::lattice::{Basis, LatticeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("rank {rank} exceeds the enumeration limit {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("block size must be at least 2, got {0}")]
    InvalidBeta(usize),
    #[error("a reduction needs rank at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("no nonzero lattice vector within the bound")]
    NoVectorWithinBound,
    #[error("output basis does not generate the input lattice")]
    LatticeNotPreserved,
}

/// Anything that returns a short coefficient vector for a projected block.
///
/// The vector is over the block's own basis; returning `e₁` means "keep".
pub trait SvpOracle {
    type Error: Display;

    fn solve(&mut self, block: &Basis) -> Result<Vec<i64>, Self::Error>;
}

impl<O: SvpOracle + ?Sized> SvpOracle for &mut O {
    type Error = O::Error;

    fn solve(&mut self, block: &Basis) -> Result<Vec<i64>, Self::Error> {
        (**self).solve(block)
    }
}

/// Exact oracle backed by [`enumerate_shortest`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactOracle;

impl SvpOracle for ExactOracle {
    type Error = ReductionError;

    fn solve(&mut self, block: &Basis) -> Result<Vec<i64>, ReductionError> {
        enumerate_shortest(block, None).map(|(x, _)| x)
    }
}
