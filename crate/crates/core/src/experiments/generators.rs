use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ExperimentError;
use crate::lattice::{determinant, Basis};

/// Square integer basis with entries uniform in `[-bound, bound]`, redrawn
/// until nonsingular.
pub fn gen_random_lattice(rank: usize, entry_bound: i64, seed: u64) -> Result<Basis, ExperimentError> {
    if rank < 2 || entry_bound < 1 {
        return Err(ExperimentError::InvalidSpec(format!(
            "random lattice needs rank >= 2 and bound >= 1, got {rank} and {entry_bound}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<i64>> = (0..rank)
            .map(|_| (0..rank).map(|_| rng.random_range(-entry_bound..=entry_bound)).collect())
            .collect();
        if determinant(&rows) != 0 {
            return Ok(Basis::from_integers(&rows)?);
        }
    }
}

/// q-ary basis with rows of `[[I_{d-k}, A], [0, q·I_k]]`, `A` uniform in `[0, q)`.
pub fn gen_qary_lattice(d: usize, k: usize, q: i64, seed: u64) -> Result<Basis, ExperimentError> {
    if k == 0 || k >= d || q < 2 {
        return Err(ExperimentError::InvalidShape { d, k, q });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![vec![0i64; d]; d];
    for (i, row) in rows.iter_mut().enumerate().take(d - k) {
        row[i] = 1;
        for e in &mut row[d - k..] {
            *e = rng.random_range(0..q);
        }
    }
    for (i, row) in rows.iter_mut().enumerate().skip(d - k) {
        row[i] = q;
    }
    Ok(Basis::from_integers(&rows)?)
}
