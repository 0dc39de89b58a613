use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};

use super::exact::{inverse, is_positive_definite, rank};
use super::VoronoiError;
use crate::lattice::{self, IVec};
use crate::Rational;

/// A positive-definite quadratic form q(x) = x^t G x with rational Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    gram: Vec<Vec<Rational>>,
}

impl QuadForm {
    pub fn new(gram: Vec<Vec<Rational>>) -> Result<Self, VoronoiError> {
        let n = gram.len();
        if n == 0 || n > lattice::MAX_RANK || gram.iter().any(|r| r.len() != n) {
            return Err(VoronoiError::BadRank(n));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(VoronoiError::NotPositiveDefinite);
                }
            }
        }
        if !is_positive_definite(&gram) {
            return Err(VoronoiError::NotPositiveDefinite);
        }
        Ok(QuadForm { gram })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self, VoronoiError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn eval(&self, x: &IVec) -> Rational {
        let n = self.n();
        let mut s = Rational::zero();
        for i in 0..n {
            for j in 0..n {
                s += &self.gram[i][j] * Rational::from_integer((x[i] * x[j]).into());
            }
        }
        s
    }

    /// Nonzero integer vectors attaining the minimum, one per +- pair (first
    /// nonzero coordinate positive), in increasing lexicographic order.
    pub fn minimal_vectors(&self) -> Vec<IVec> {
        let n = self.n();
        let bound = (0..n).map(|i| self.gram[i][i].clone()).min().unwrap();
        let inv = inverse(&self.gram).expect("positive definite");
        // |x_i|^2 <= m (G^{-1})_{ii} for q(x) <= m.
        let radius: Vec<i64> = (0..n)
            .map(|i| {
                let b = (&bound * &inv[i][i]).ceil().to_integer().to_i64().unwrap();
                b.sqrt() + 1
            })
            .collect();
        let mut best: Option<Rational> = None;
        let mut found = Vec::new();
        let mut x = [0i64; lattice::MAX_RANK];
        let total: i64 = radius.iter().map(|r| 2 * r + 1).product();
        for mut code in 0..total {
            for i in 0..n {
                let w = 2 * radius[i] + 1;
                x[i] = code % w - radius[i];
                code /= w;
            }
            if lattice::is_zero(&x) || lattice::normalize(&x).1 < 0 {
                continue;
            }
            let v = self.eval(&x);
            match &best {
                Some(b) if v > *b => {}
                Some(b) if v == *b => found.push(x),
                _ => {
                    best = Some(v);
                    found = vec![x];
                }
            }
        }
        found.sort();
        found
    }

    /// Perfect iff the rank-one forms on the minimal vectors span all
    /// symmetric matrices.
    pub fn is_perfect(&self) -> bool {
        let n = self.n();
        let forms: Vec<Vec<Rational>> = self.minimal_vectors().iter().map(|v| sym_coords(n, v)).collect();
        rank(&forms) == n * (n + 1) / 2
    }
}

/// Coordinates of v v^t on the upper-triangular basis, as rationals.
pub fn sym_coords(n: usize, v: &IVec) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            out.push(Rational::from_integer((v[i] * v[j]).into()));
        }
    }
    out
}

/// Representatives of the GL(n, Z)-classes of perfect forms: A_n for
/// n = 2, 3 and A_4, D_4 for n = 4.
pub fn perfect_forms(n: usize) -> Result<Vec<QuadForm>, VoronoiError> {
    let a_n = |n: usize| -> Vec<Vec<i64>> {
        (0..n).map(|i| (0..n).map(|j| if i == j { 2 } else { 1 }).collect()).collect()
    };
    let grams = match n {
        2 | 3 => vec![a_n(n)],
        4 => vec![
            a_n(4),
            vec![vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]],
        ],
        _ => return Err(VoronoiError::BadRank(n)),
    };
    grams.iter().map(|g| QuadForm::from_integers(g)).collect()
}
