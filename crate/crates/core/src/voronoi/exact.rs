//! Exact linear algebra over an ordered field scalar.

use num_traits::{Num, Signed};

/// Scalars usable for exact elimination: an ordered field.
pub trait Scalar: Clone + PartialEq + PartialOrd + Num + Signed {}

impl<T: Clone + PartialEq + PartialOrd + Num + Signed> Scalar for T {}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<T: Scalar>(m: &mut [Vec<T>]) -> Vec<usize> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let s = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = x.clone() - s.clone() * y.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(rows: &[Vec<T>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of {x : M x = 0}.
pub fn kernel<T: Scalar>(rows: &[Vec<T>], ncols: usize) -> Vec<Vec<T>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![T::zero(); ncols];
            v[fc] = T::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[i][fc].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square matrix, if invertible.
pub fn inverse<T: Scalar>(rows: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = rows.len();
    let mut m: Vec<Vec<T>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Leading-principal-minor test for a symmetric matrix.
pub fn is_positive_definite<T: Scalar>(rows: &[Vec<T>]) -> bool {
    // Gaussian elimination without pivoting: all pivots positive.
    let mut m = rows.to_vec();
    let n = m.len();
    for k in 0..n {
        if m[k][k] <= T::zero() {
            return false;
        }
        for i in k + 1..n {
            let s = m[i][k].clone() / m[k][k].clone();
            for j in k..n {
                let t = m[k][j].clone();
                m[i][j] = m[i][j].clone() - s.clone() * t;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    #[test]
    fn kernel_inverse_pd() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        assert_eq!(rank(&m), 1);
        assert_eq!(kernel(&m, 3).len(), 2);
        let a = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert!(is_positive_definite(&a));
        assert!(!is_positive_definite(&[vec![q(1), q(2)], vec![q(2), q(1)]]));
        assert!(inverse(&m[..1].iter().map(|r| r[..1].to_vec()).chain([vec![q(0)]]).collect::<Vec<_>>()).is_none());
    }
}
