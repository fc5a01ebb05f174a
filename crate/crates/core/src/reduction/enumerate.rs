use super::ReductionError;
use crate::lattice::{gram_schmidt, lattice_vector, Basis};

/// Largest rank `enumerate_shortest` accepts.
pub const MAX_ENUM_RANK: usize = 8;

struct Search<'a> {
    mu: &'a [Vec<f64>],
    norms: &'a [f64],
    x: Vec<i64>,
    radius: f64,
    best: Option<(Vec<i64>, f64)>,
}

impl Search<'_> {
    /// Depth-first over coordinate `i` given `partial = Σ_{l>i} ‖π_l(v)‖²`.
    fn visit(&mut self, i: usize, partial: f64) {
        let r = self.x.len();
        let center: f64 = -((i + 1)..r).map(|l| self.x[l] as f64 * self.mu[l][i]).sum::<f64>();
        let room = self.radius - partial;
        if room < 0.0 {
            return;
        }
        let width = (room / self.norms[i]).sqrt();
        // ±v have equal norm: keep the highest nonzero coordinate positive
        let top = self.x[i + 1..].iter().all(|&c| c == 0);
        let lo = if top { 0 } else { (center - width).ceil() as i64 };
        let hi = (center + width).floor() as i64;
        for xi in lo..=hi {
            let d = xi as f64 - center;
            let p = partial + d * d * self.norms[i];
            if p > self.radius {
                continue;
            }
            self.x[i] = xi;
            if i > 0 {
                self.visit(i - 1, p);
            } else if self.x.iter().any(|&c| c != 0) {
                let improves = match &self.best {
                    Some((_, b)) => p < b * (1.0 - 1e-9),
                    None => true,
                };
                if improves {
                    self.best = Some((self.x.clone(), p));
                    self.radius = p;
                }
            }
        }
        self.x[i] = 0;
    }
}

/// Flips `x` so its first nonzero entry is positive.
pub fn sign_normalize(x: &mut [i64]) {
    if x.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
        x.iter_mut().for_each(|c| *c = -*c);
    }
}

/// Shortest nonzero vector of `L(basis)` by Fincke–Pohst enumeration.
///
/// Returns its coefficients (first nonzero entry positive) and squared norm.
/// The search starts from `e₁` and only moves on a strict improvement, so a
/// basis whose first vector is already shortest yields `e₁`. With `bound`
/// the radius is capped at that squared norm.
pub fn enumerate_shortest(basis: &Basis, bound: Option<f64>) -> Result<(Vec<i64>, f64), ReductionError> {
    let r = basis.rank();
    if r > MAX_ENUM_RANK {
        return Err(ReductionError::RankTooLarge { rank: r, max: MAX_ENUM_RANK });
    }
    let gso = gram_schmidt(basis)?;
    let first = gso.norms_sq[0];
    let mut e1 = vec![0; r];
    e1[0] = 1;
    let (radius, best) = match bound {
        Some(b) if b < first => (b, None),
        _ => (first, Some((e1, first))),
    };
    let mut s = Search {
        mu: &gso.mu,
        norms: &gso.norms_sq,
        x: vec![0; r],
        radius,
        best,
    };
    s.visit(r - 1, 0.0);
    let (mut x, _) = s.best.ok_or(ReductionError::NoVectorWithinBound)?;
    sign_normalize(&mut x);
    let (_, n2) = lattice_vector(basis, &x)?;
    Ok((x, n2))
}
