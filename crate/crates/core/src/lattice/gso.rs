use super::{dot, norm_sq, Basis, LatticeError, ZERO_TOLERANCE};

/// Gram–Schmidt data of a basis: orthogonal vectors `b*_i` and the strictly
/// lower-triangular coefficients `mu[i][j] = (b_i · b*_j) / (b*_j · b*_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gso {
    pub bstar: Vec<Vec<f64>>,
    pub mu: Vec<Vec<f64>>,
    pub norms_sq: Vec<f64>,
}

impl Gso {
    pub fn rank(&self) -> usize {
        self.bstar.len()
    }

    pub fn norm(&self, i: usize) -> f64 {
        self.norms_sq[i].sqrt()
    }
}

/// Orthogonalizes without rejecting vanishing vectors; `mu[i][j]` is zero
/// whenever `b*_j` vanishes. Used by LLL in dependency-removal mode.
pub(crate) fn gram_schmidt_lenient(vectors: &[Vec<f64>]) -> (Gso, Option<usize>) {
    let r = vectors.len();
    let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(r);
    let mut mu = vec![vec![0.0; r]; r];
    let mut norms_sq = Vec::with_capacity(r);
    let mut first_zero = None;
    for i in 0..r {
        let mut v = vectors[i].clone();
        for j in 0..i {
            if is_zero(norms_sq[j], &vectors[j]) {
                continue;
            }
            // modified Gram-Schmidt: project the running vector
            let m = dot(&v, &bstar[j]) / norms_sq[j];
            mu[i][j] = m;
            for (e, s) in v.iter_mut().zip(&bstar[j]) {
                *e -= m * s;
            }
        }
        let n2 = norm_sq(&v);
        if first_zero.is_none() && is_zero(n2, &vectors[i]) {
            first_zero = Some(i);
        }
        norms_sq.push(n2);
        bstar.push(v);
    }
    (
        Gso {
            bstar,
            mu,
            norms_sq,
        },
        first_zero,
    )
}

pub(crate) fn is_zero(bstar_norm_sq: f64, original: &[f64]) -> bool {
    let scale = norm_sq(original).max(1.0);
    bstar_norm_sq <= ZERO_TOLERANCE * ZERO_TOLERANCE * scale
}

pub fn gram_schmidt(basis: &Basis) -> Result<Gso, LatticeError> {
    let (gso, zero) = gram_schmidt_lenient(basis.vectors());
    match zero {
        Some(index) => Err(LatticeError::DegenerateBasis { index }),
        None => Ok(gso),
    }
}

/// Projects `b_start, …, b_{end-1}` orthogonally to `span(b_0, …, b_{start-1})`.
///
/// Indices are zero-based and `end` is exclusive. The projected vectors are
/// expressed in the ambient coordinates: `π(b_i) = b*_i + Σ_{start≤l<i} μ_{i,l} b*_l`.
pub fn project_block(
    basis: &Basis,
    gso: &Gso,
    start: usize,
    end: usize,
) -> Result<Basis, LatticeError> {
    let rank = basis.rank();
    if start >= end || end > rank || gso.rank() != rank {
        return Err(LatticeError::IndexOutOfRange { start, end, rank });
    }
    let vectors = (start..end)
        .map(|i| {
            let mut v = gso.bstar[i].clone();
            for l in start..i {
                let m = gso.mu[i][l];
                for (e, s) in v.iter_mut().zip(&gso.bstar[l]) {
                    *e += m * s;
                }
            }
            v
        })
        .collect();
    Basis::new(vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn two_dimensional_example() {
        let b = Basis::from_integers(&[vec![3, 0], vec![1, 2]]).unwrap();
        let g = gram_schmidt(&b).unwrap();
        assert!(close(&g.bstar[0], &[3.0, 0.0]));
        assert!(close(&g.bstar[1], &[0.0, 2.0]));
        assert!((g.mu[1][0] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn identity_is_fixed() {
        let b = Basis::identity(3);
        let g = gram_schmidt(&b).unwrap();
        assert_eq!(g.bstar, b.vectors());
        assert!(g.mu.iter().flatten().all(|&m| m == 0.0));
    }

    #[test]
    fn dependent_vectors_are_degenerate() {
        let b = Basis::from_integers(&[vec![1, 0], vec![2, 0]]).unwrap();
        assert_eq!(
            gram_schmidt(&b),
            Err(LatticeError::DegenerateBasis { index: 1 })
        );
    }

    #[test]
    fn projection_examples() {
        let b = Basis::from_integers(&[vec![3, 0], vec![1, 2]]).unwrap();
        let g = gram_schmidt(&b).unwrap();
        let p = project_block(&b, &g, 1, 2).unwrap();
        assert!(close(p.vector(0), &[0.0, 2.0]));

        let whole = project_block(&b, &g, 0, 2).unwrap();
        assert!(close(whole.vector(0), b.vector(0)));
        assert!(close(whole.vector(1), b.vector(1)));

        let id = Basis::identity(4);
        let gi = gram_schmidt(&id).unwrap();
        let p = project_block(&id, &gi, 1, 3).unwrap();
        assert_eq!(p.vectors(), &id.vectors()[1..3]);
    }

    #[test]
    fn projection_range_checked() {
        let b = Basis::identity(3);
        let g = gram_schmidt(&b).unwrap();
        assert!(project_block(&b, &g, 2, 2).is_err());
        assert!(project_block(&b, &g, 1, 4).is_err());
    }
}
