use serde::{Deserialize, Serialize};

use super::{ReductionError, SvpOracle};
use crate::lattice::{
    change_of_basis, gram_schmidt, is_unimodular, lattice_vector, lll_reduce, lll_reduce_with, project_block,
    Basis, LllMode,
};

pub const DEFAULT_MAX_TOURS: usize = 64;

/// Relative margin by which an oracle vector must beat `‖b*_j‖²` to be inserted.
const INSERT_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Insert,
    Keep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStatus {
    Converged,
    TimedOut,
}

/// One oracle call. `j` and `k` are 1-based and inclusive; norms are the
/// Gram–Schmidt norms `‖b*_i‖` of the whole basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TourEvent {
    pub tour: usize,
    pub j: usize,
    pub k: usize,
    pub action: Action,
    pub v: Option<Vec<i64>>,
    pub norms_before: Vec<f64>,
    pub norms_after: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionOutcome {
    pub basis: Basis,
    pub status: ReductionStatus,
    pub tours: usize,
    pub events: Vec<TourEvent>,
}

impl ReductionOutcome {
    pub fn events_json(&self) -> String {
        serde_json::to_string_pretty(&self.events).expect("plain event records")
    }
}

fn gso_norms(basis: &Basis) -> Result<Vec<f64>, ReductionError> {
    Ok(gram_schmidt(basis)?.norms_sq.iter().map(|n| n.sqrt()).collect())
}

/// Runs LLL on the first `len` vectors and keeps the rest as they are.
fn lll_prefix(vectors: Vec<Vec<f64>>, len: usize, delta: f64, mode: LllMode) -> Result<Vec<Vec<f64>>, ReductionError> {
    let mut vectors = vectors;
    let rest = vectors.split_off(len);
    let mut out = lll_reduce_with(&Basis::new(vectors)?, delta, mode)?.into_vectors();
    out.extend(rest);
    Ok(out)
}

/// Ranks bases for the best-so-far fallback: shorter `b₁`, then smaller potential.
fn quality(basis: &Basis) -> Result<(f64, f64), ReductionError> {
    Ok((basis.norms_sq()[0], super::log_potential(basis)?))
}

/// The block tour loop.
///
/// After an initial LLL pass, `j` cycles over `1..r-1`; block `[j, k]` with
/// `k = min(j+β-1, r)` is projected and handed to `oracle`. A returned
/// vector that is not `e₁` and is strictly shorter than `b*_j` is inserted
/// at `j` and the first `h+1` vectors (`h = min(k+1, r)`) are LLL-reduced
/// with the resulting dependency removed; otherwise the first `h` vectors
/// are LLL-reduced. The loop ends after `r-1` consecutive keeps, or after
/// `max_tours` passes with the best basis seen at a tour boundary.
///
/// Oracle errors count as a keep and are recorded in the event's warning.
pub fn vqkz_reduce<O: SvpOracle>(
    basis: &Basis,
    beta: usize,
    delta: f64,
    mut oracle: O,
    max_tours: usize,
) -> Result<ReductionOutcome, ReductionError> {
    if beta < 2 {
        return Err(ReductionError::InvalidBeta(beta));
    }
    let r = basis.rank();
    if r < 2 {
        return Err(ReductionError::RankTooSmall(r));
    }
    let mut b = lll_reduce(basis, delta)?;
    let mut events = Vec::new();
    let (mut z, mut j, mut tours) = (0usize, 0usize, 0usize);
    let mut best: Option<(Basis, (f64, f64))> = None;
    let mut status = ReductionStatus::Converged;

    while z < r - 1 {
        j = (j % (r - 1)) + 1;
        if j == 1 {
            let q = quality(&b)?;
            if best.as_ref().is_none_or(|(_, bq)| q < *bq) {
                best = Some((b.clone(), q));
            }
            if tours == max_tours {
                status = ReductionStatus::TimedOut;
                break;
            }
            tours += 1;
        }
        let k = (j + beta - 1).min(r);
        let h = (k + 1).min(r);
        let gso = gram_schmidt(&b)?;
        let norms_before: Vec<f64> = gso.norms_sq.iter().map(|n| n.sqrt()).collect();
        let block = project_block(&b, &gso, j - 1, k)?;

        let (v, insert, warning) = match oracle.solve(&block) {
            Ok(v) if v.len() != block.rank() => {
                let w = format!("oracle returned {} coefficients for a block of {}", v.len(), block.rank());
                (Some(v), false, Some(w))
            }
            Ok(v) => {
                let is_e1 = v[0].abs() == 1 && v[1..].iter().all(|&c| c == 0);
                let (_, proj) = lattice_vector(&block, &v)?;
                let lead = gso.norms_sq[j - 1];
                let insert = !is_e1 && proj > 0.0 && proj < lead * (1.0 - INSERT_MARGIN);
                let warning = (!is_e1 && proj > lead * (1.0 + INSERT_MARGIN))
                    .then(|| format!("oracle vector has norm² {proj} above ‖b*_j‖² = {lead}"));
                (Some(v), insert, warning)
            }
            Err(e) => (None, false, Some(format!("oracle failed: {e}"))),
        };
        let insert = if insert { v.clone() } else { None };
        events.push(TourEvent {
            tour: tours,
            j,
            k,
            action: if insert.is_some() { Action::Insert } else { Action::Keep },
            v,
            norms_before,
            norms_after: Vec::new(),
            warning,
        });

        let vectors = b.into_vectors();
        let next = match insert {
            Some(v) => {
                z = 0;
                let mut new = vec![0.0; vectors[0].len()];
                for (i, &c) in v.iter().enumerate() {
                    for (e, s) in new.iter_mut().zip(&vectors[j - 1 + i]) {
                        *e += c as f64 * s;
                    }
                }
                let mut vs = vectors;
                vs.insert(j - 1, new);
                let out = lll_prefix(vs, h + 1, delta, LllMode::RemoveDependencies)?;
                if out.len() != r {
                    return Err(ReductionError::LatticeNotPreserved);
                }
                out
            }
            None => {
                z += 1;
                lll_prefix(vectors, h, delta, LllMode::Strict)?
            }
        };
        b = Basis::new(next)?;
        if let Some(last) = events.last_mut() {
            last.norms_after = gso_norms(&b)?;
        }
    }

    if status == ReductionStatus::TimedOut {
        if let Some((bb, _)) = best {
            b = bb;
        }
    }
    let u = change_of_basis(basis, &b).ok_or(ReductionError::LatticeNotPreserved)?;
    if !is_unimodular(&u) {
        return Err(ReductionError::LatticeNotPreserved);
    }
    Ok(ReductionOutcome {
        basis: b,
        status,
        tours,
        events,
    })
}
