use super::gso::{gram_schmidt_lenient, Gso};
use super::{check_delta, gram_schmidt, norm_sq, Basis, LatticeError, CHECK_TOLERANCE, ZERO_TOLERANCE};

/// How LLL treats linearly dependent input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LllMode {
    /// Input must be independent; degenerate input is an error.
    #[default]
    Strict,
    /// Input may be a generating set. Vectors reduced to zero are dropped, so
    /// the output rank equals the rank of the span.
    RemoveDependencies,
}

pub fn lll_reduce(basis: &Basis, delta: f64) -> Result<Basis, LatticeError> {
    lll_reduce_with(basis, delta, LllMode::Strict)
}

/// Classic Lenstra–Lenstra–Lovász reduction with in-loop size reduction.
pub fn lll_reduce_with(basis: &Basis, delta: f64, mode: LllMode) -> Result<Basis, LatticeError> {
    check_delta(delta)?;
    let scale = basis
        .vectors()
        .iter()
        .map(|v| norm_sq(v))
        .fold(1.0_f64, f64::max);
    let vanishes = |v: &[f64]| norm_sq(v) <= ZERO_TOLERANCE * ZERO_TOLERANCE * scale;

    let mut b: Vec<Vec<f64>> = basis.vectors().to_vec();
    match mode {
        LllMode::Strict => {
            gram_schmidt(basis)?;
        }
        LllMode::RemoveDependencies => {
            b.retain(|v| !vanishes(v));
            if b.is_empty() {
                return Err(LatticeError::Empty);
            }
        }
    }

    let (mut gso, _) = gram_schmidt_lenient(&b);
    let mut k = 1;
    while k < b.len() {
        size_reduce_row(&mut b, &mut gso, k);
        if mode == LllMode::RemoveDependencies && vanishes(&b[k]) {
            b.remove(k);
            gso = gram_schmidt_lenient(&b).0;
            continue;
        }
        let m = gso.mu[k][k - 1];
        let lhs = delta * gso.norms_sq[k - 1];
        let rhs = gso.norms_sq[k] + m * m * gso.norms_sq[k - 1];
        if lhs > rhs {
            b.swap(k - 1, k);
            gso = gram_schmidt_lenient(&b).0;
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    Basis::new(b)
}

/// Reduces `b[k]` against `b[0..k]` so that all `|mu[k][j]| <= 1/2`.
/// `b*_k` is unchanged by this, so only row `k` of `mu` needs updating.
fn size_reduce_row(b: &mut [Vec<f64>], gso: &mut Gso, k: usize) {
    for j in (0..k).rev() {
        let m = gso.mu[k][j];
        if m.abs() <= 0.5 + CHECK_TOLERANCE {
            continue;
        }
        let q = m.round();
        let (head, tail) = b.split_at_mut(k);
        for (e, s) in tail[0].iter_mut().zip(&head[j]) {
            *e -= q * s;
        }
        for i in 0..j {
            gso.mu[k][i] -= q * gso.mu[j][i];
        }
        gso.mu[k][j] -= q;
    }
}

/// Size reduction only: a unimodular transform after which `|mu| <= 1/2`.
pub fn size_reduce(basis: &Basis) -> Result<Basis, LatticeError> {
    let mut gso = gram_schmidt(basis)?;
    let mut b = basis.vectors().to_vec();
    for k in 1..b.len() {
        size_reduce_row(&mut b, &mut gso, k);
    }
    Basis::new(b)
}

pub fn is_size_reduced(basis: &Basis) -> bool {
    match gram_schmidt(basis) {
        Ok(gso) => mu_size_reduced(&gso),
        Err(_) => false,
    }
}

pub(crate) fn mu_size_reduced(gso: &Gso) -> bool {
    gso.mu
        .iter()
        .enumerate()
        .all(|(i, row)| row[..i].iter().all(|m| m.abs() <= 0.5 + CHECK_TOLERANCE))
}

/// Both δ-LLL conditions, each checked within `CHECK_TOLERANCE`.
pub fn is_lll_reduced(basis: &Basis, delta: f64) -> bool {
    let Ok(gso) = gram_schmidt(basis) else {
        return false;
    };
    if !mu_size_reduced(&gso) {
        return false;
    }
    (1..gso.rank()).all(|i| {
        let m = gso.mu[i][i - 1];
        let lhs = delta * gso.norms_sq[i - 1];
        let rhs = gso.norms_sq[i] + m * m * gso.norms_sq[i - 1];
        lhs <= rhs + CHECK_TOLERANCE * lhs.max(1.0)
    })
}
