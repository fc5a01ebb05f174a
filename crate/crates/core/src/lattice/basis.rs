use serde::{Deserialize, Serialize};

use super::{dot, norm_sq, LatticeError};

/// An ordered list of lattice vectors of a common ambient dimension.
///
/// Linear independence is not enforced at construction: LLL in
/// dependency-removal mode accepts generating sets. Operations that need an
/// independent basis report [`LatticeError::DegenerateBasis`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Basis {
    vectors: Vec<Vec<f64>>,
}

impl Basis {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self, LatticeError> {
        let dim = vectors.first().ok_or(LatticeError::Empty)?.len();
        if dim == 0 {
            return Err(LatticeError::Empty);
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(LatticeError::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        Ok(Self { vectors })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| x as f64).collect())
                .collect(),
        )
    }

    /// The r×r identity basis.
    pub fn identity(rank: usize) -> Self {
        let vectors = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self { vectors }
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i]
    }

    pub fn into_vectors(self) -> Vec<Vec<f64>> {
        self.vectors
    }

    pub fn is_integral(&self) -> bool {
        self.vectors
            .iter()
            .flatten()
            .all(|x| x.fract() == 0.0 && x.abs() < 9.0e15)
    }

    pub fn to_integers(&self) -> Option<Vec<Vec<i64>>> {
        if !self.is_integral() {
            return None;
        }
        Some(
            self.vectors
                .iter()
                .map(|r| r.iter().map(|&x| x as i64).collect())
                .collect(),
        )
    }

    /// Squared Euclidean norms of the basis vectors.
    pub fn norms_sq(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| norm_sq(v)).collect()
    }

    /// The Gram matrix `G[l][s] = b_l · b_s`.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        let r = self.rank();
        let mut g = vec![vec![0.0; r]; r];
        for l in 0..r {
            for s in l..r {
                let v = dot(&self.vectors[l], &self.vectors[s]);
                g[l][s] = v;
                g[s][l] = v;
            }
        }
        g
    }

    /// Integer combination `Σ x_i b_i`.
    pub fn combine(&self, x: &[i64]) -> Result<Vec<f64>, LatticeError> {
        if x.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                found: x.len(),
            });
        }
        let mut out = vec![0.0; self.dim()];
        for (c, v) in x.iter().zip(&self.vectors) {
            if *c == 0 {
                continue;
            }
            let c = *c as f64;
            for (o, e) in out.iter_mut().zip(v) {
                *o += c * e;
            }
        }
        Ok(out)
    }
}

/// Returns `Bx` together with `xᵀ(BᵀB)x`.
pub fn lattice_vector(basis: &Basis, x: &[i64]) -> Result<(Vec<f64>, f64), LatticeError> {
    let v = basis.combine(x)?;
    let g = basis.gram();
    let mut n2 = 0.0;
    for (l, xl) in x.iter().enumerate() {
        for (s, xs) in x.iter().enumerate() {
            n2 += (*xl as f64) * (*xs as f64) * g[l][s];
        }
    }
    Ok((v, n2.max(0.0)))
}
