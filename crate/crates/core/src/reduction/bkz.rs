use super::{enumerate_shortest, vqkz_reduce, ExactOracle, ReductionError, ReductionOutcome, DEFAULT_MAX_TOURS};
use crate::lattice::{gram_schmidt, is_size_reduced, project_block, Basis, CHECK_TOLERANCE};

/// Classical BKZ: the tour loop with the exact enumeration oracle.
pub fn bkz_classical(basis: &Basis, beta: usize, delta: f64) -> Result<ReductionOutcome, ReductionError> {
    vqkz_reduce(basis, beta, delta, ExactOracle, DEFAULT_MAX_TOURS)
}

/// Size-reduced, and every `‖b*_j‖` is the minimum of its projected block of
/// size `β` (truncated at the end), within a relative `1e-9`.
pub fn is_bkz_reduced(basis: &Basis, beta: usize) -> Result<bool, ReductionError> {
    if beta < 2 {
        return Err(ReductionError::InvalidBeta(beta));
    }
    let gso = gram_schmidt(basis)?;
    if !is_size_reduced(basis) {
        return Ok(false);
    }
    let r = basis.rank();
    for j in 0..r.saturating_sub(1) {
        let k = (j + beta).min(r);
        let block = project_block(basis, &gso, j, k)?;
        let (_, lambda_sq) = enumerate_shortest(&block, None)?;
        if gso.norms_sq[j] > lambda_sq * (1.0 + CHECK_TOLERANCE) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Multiplicative bound `α^{(r-1)/(β-1)}` on `‖b₁‖² / λ₁²` for a β-BKZ basis.
pub fn bkz_quality_bound(beta: usize, r: usize, alpha_beta: f64) -> f64 {
    alpha_beta.powf((r as f64 - 1.0) / (beta as f64 - 1.0))
}

/// `Σ_i (r-i) ln ‖b*_i‖²` (0-based `i`); LLL swaps and shorter insertions lower it.
pub fn log_potential(basis: &Basis) -> Result<f64, ReductionError> {
    let gso = gram_schmidt(basis)?;
    let r = gso.rank();
    Ok(potential_from_norms_sq(&gso.norms_sq, r))
}

pub(crate) fn potential_from_norms_sq(norms_sq: &[f64], r: usize) -> f64 {
    norms_sq
        .iter()
        .enumerate()
        .map(|(i, n)| (r - i) as f64 * n.ln())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{change_of_basis, is_lll_reduced, is_unimodular, lll_reduce};
    use crate::reduction::{Action, ReductionStatus, SvpOracle};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_basis(r: usize, bound: i64, seed: u64) -> Basis {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let rows: Vec<Vec<i64>> = (0..r)
                .map(|_| (0..r).map(|_| rng.random_range(-bound..=bound)).collect())
                .collect();
            let b = Basis::from_integers(&rows).unwrap();
            if gram_schmidt(&b).is_ok() {
                return b;
            }
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bkz_quality_bound(3, 9, 1.0), 1.0);
        assert!((bkz_quality_bound(5, 5, 1.7) - 1.7).abs() < 1e-15);
        assert_eq!(bkz_quality_bound(2, 3, 2.0), 4.0);
    }

    #[test]
    fn checker_examples() {
        assert!(is_bkz_reduced(&Basis::identity(4), 3).unwrap());
        let b = Basis::from_integers(&[vec![1, 0], vec![5, 1]]).unwrap();
        assert!(!is_bkz_reduced(&b, 2).unwrap());
        // size-reduced but b₁ is not shortest
        let b = Basis::from_integers(&[vec![2, 0], vec![1, 1]]).unwrap();
        assert!(!is_bkz_reduced(&b, 2).unwrap());
    }

    #[test]
    fn identity_is_unchanged() {
        let out = bkz_classical(&Basis::identity(5), 3, 0.75).unwrap();
        assert_eq!(out.basis, Basis::identity(5));
        assert_eq!(out.status, ReductionStatus::Converged);
        assert_eq!(out.tours, 1);
        assert_eq!(out.events.len(), 4);
        assert!(out.events.iter().all(|e| e.action == Action::Keep));
    }

    #[test]
    fn exact_oracle_gives_bkz_bases() {
        for seed in 0..6 {
            let b = random_basis(7, 50, seed);
            let out = bkz_classical(&b, 3, 0.75).unwrap();
            assert_eq!(out.status, ReductionStatus::Converged);
            assert!(is_bkz_reduced(&out.basis, 3).unwrap(), "seed {seed}");
            assert!(is_lll_reduced(&out.basis, 0.75));
            let u = change_of_basis(&b, &out.basis).unwrap();
            assert!(is_unimodular(&u));
            let lll = lll_reduce(&b, 0.75).unwrap();
            assert!(out.basis.norms_sq()[0] <= lll.norms_sq()[0]);
        }
    }

    #[test]
    fn potential_never_increases() {
        for seed in 10..14 {
            let b = random_basis(6, 50, seed);
            let out = bkz_classical(&b, 3, 0.75).unwrap();
            let r = b.rank();
            for e in &out.events {
                let sq = |v: &[f64]| v.iter().map(|n| n * n).collect::<Vec<_>>();
                let before = potential_from_norms_sq(&sq(&e.norms_before), r);
                let after = potential_from_norms_sq(&sq(&e.norms_after), r);
                assert!(after <= before + 1e-9 * before.abs().max(1.0));
            }
        }
    }

    #[test]
    fn rank_three_beats_lll_at_beta_two() {
        let b = random_basis(3, 50, 77);
        let out = bkz_classical(&b, 2, 0.75).unwrap();
        let lll = lll_reduce(&b, 0.75).unwrap();
        assert!(out.basis.norms_sq()[0] <= lll.norms_sq()[0]);
        assert!(is_bkz_reduced(&out.basis, 2).unwrap());
    }

    /// Always claims `e₂` is shorter, whatever the block.
    struct Stubborn;

    impl SvpOracle for Stubborn {
        type Error = ReductionError;
        fn solve(&mut self, block: &Basis) -> Result<Vec<i64>, ReductionError> {
            let mut v = vec![0; block.rank()];
            v[1] = 1;
            Ok(v)
        }
    }

    /// Fails every call.
    struct Broken;

    impl SvpOracle for Broken {
        type Error = ReductionError;
        fn solve(&mut self, _: &Basis) -> Result<Vec<i64>, ReductionError> {
            Err(ReductionError::NoVectorWithinBound)
        }
    }

    #[test]
    fn bad_oracles_are_contained() {
        let b = random_basis(5, 20, 3);
        let out = vqkz_reduce(&b, 3, 0.75, Stubborn, 4).unwrap();
        assert!(out.tours <= 4);
        assert!(is_unimodular(&change_of_basis(&b, &out.basis).unwrap()));
        assert!(out.events.iter().all(|e| e.v.is_some()));

        let out = vqkz_reduce(&b, 3, 0.75, Broken, 4).unwrap();
        assert_eq!(out.status, ReductionStatus::Converged);
        assert!(out.events.iter().all(|e| e.warning.is_some() && e.v.is_none()));
        assert_eq!(out.basis, lll_reduce(&b, 0.75).unwrap());
    }

    /// Exact on odd calls, failing on even ones.
    struct Flaky(usize);

    impl SvpOracle for Flaky {
        type Error = String;
        fn solve(&mut self, block: &Basis) -> Result<Vec<i64>, String> {
            self.0 += 1;
            if self.0 % 2 == 0 {
                return Err("glitch".into());
            }
            enumerate_shortest(block, None).map(|(x, _)| x).map_err(|e| e.to_string())
        }
    }

    #[test]
    fn tour_cap_returns_best() {
        let b = random_basis(6, 50, 21);
        let out = vqkz_reduce(&b, 3, 0.75, Flaky(0), 1).unwrap();
        assert!(out.tours <= 1);
        let u = change_of_basis(&b, &out.basis).unwrap();
        assert!(is_unimodular(&u));
        assert!(vqkz_reduce(&b, 1, 0.75, ExactOracle, 1).is_err());
        assert!(vqkz_reduce(&b, 3, 1.5, ExactOracle, 1).is_err());
    }

    #[test]
    fn event_log_round_trips() {
        let out = bkz_classical(&random_basis(4, 30, 5), 2, 0.75).unwrap();
        let back: Vec<crate::reduction::TourEvent> = serde_json::from_str(&out.events_json()).unwrap();
        assert_eq!(back, out.events);
    }
}
