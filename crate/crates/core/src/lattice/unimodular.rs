use super::{dot, Basis};

/// Integer matrix `U` with `to = U · from` (bases as rows), if one exists.
///
/// Solves the normal equations in floating point, rounds, and then checks the
/// product exactly, so a returned matrix is always a genuine integer relation.
pub fn change_of_basis(from: &Basis, to: &Basis) -> Option<Vec<Vec<i64>>> {
    if from.dim() != to.dim() {
        return None;
    }
    let r = from.rank();
    let gram = from.gram();
    let inv = invert(&gram)?;
    let mut u = Vec::with_capacity(to.rank());
    for t in to.vectors() {
        let rhs: Vec<f64> = from.vectors().iter().map(|f| dot(t, f)).collect();
        let row: Vec<i64> = (0..r)
            .map(|c| (0..r).map(|k| rhs[k] * inv[k][c]).sum::<f64>().round() as i64)
            .collect();
        u.push(row);
    }
    let rebuilt = Basis::from_integers(&u).ok()?;
    for (row, target) in rebuilt.vectors().iter().zip(to.vectors()) {
        let mut v = vec![0.0; from.dim()];
        for (c, f) in row.iter().zip(from.vectors()) {
            for (e, x) in v.iter_mut().zip(f) {
                *e += c * x;
            }
        }
        if v.iter().zip(target).any(|(a, b)| (a - b).abs() > 1e-6) {
            return None;
        }
    }
    Some(u)
}

fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        let p = a[col][col];
        a[col].iter_mut().for_each(|x| *x /= p);
        for row in 0..n {
            if row != col {
                let f = a[row][col];
                if f != 0.0 {
                    let pivot_row = a[col].clone();
                    for (x, y) in a[row].iter_mut().zip(&pivot_row) {
                        *x -= f * y;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Exact determinant of a square integer matrix (fraction-free Bareiss).
pub fn determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn is_unimodular(u: &[Vec<i64>]) -> bool {
    u.iter().all(|r| r.len() == u.len()) && determinant(u).abs() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_cofactor() {
        assert_eq!(determinant(&[vec![2, 1], vec![0, 2]]), 4);
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(
            determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]),
            -3
        );
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn change_of_basis_roundtrip() {
        let a = Basis::from_integers(&[vec![1, 0], vec![0, 1]]).unwrap();
        let b = Basis::from_integers(&[vec![1, 1], vec![1, 2]]).unwrap();
        let u = change_of_basis(&a, &b).unwrap();
        assert_eq!(u, vec![vec![1, 1], vec![1, 2]]);
        assert!(is_unimodular(&u));
        let half = Basis::new(vec![vec![0.5, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(change_of_basis(&a, &half).is_none());
    }
}
