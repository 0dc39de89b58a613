//! Small integer vectors and matrices in rank n <= 4, stored padded to 4.

use std::fmt;

use num_integer::Integer;

pub const MAX_RANK: usize = 4;

pub type IVec = [i64; MAX_RANK];

/// An n x n integer matrix (n <= 4); entries outside the n x n block are zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IMat {
    n: usize,
    a: [[i64; MAX_RANK]; MAX_RANK],
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<i64>> = (0..self.n).map(|i| self.a[i][..self.n].to_vec()).collect();
        write!(f, "{rows:?}")
    }
}

impl IMat {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_RANK).contains(&n), "rank {n} unsupported");
        IMat { n, a: [[0; MAX_RANK]; MAX_RANK] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.a[i][i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zero(n);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), n, "matrix must be square");
            m.a[i][..n].copy_from_slice(r);
        }
        m
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, cols: &[IVec]) -> Self {
        assert_eq!(cols.len(), n);
        let mut m = Self::zero(n);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.a[i][j] = c[i];
            }
        }
        m
    }

    pub fn diag(entries: &[i64]) -> Self {
        let mut m = Self::zero(entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m.a[i][i] = d;
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.a[i][j] = v;
    }

    pub fn row(&self, i: usize) -> IVec {
        self.a[i]
    }

    pub fn column(&self, j: usize) -> IVec {
        let mut v = [0; MAX_RANK];
        for i in 0..self.n {
            v[i] = self.a[i][j];
        }
        v
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.a[i][..self.n].to_vec()).collect()
    }

    pub fn mul(&self, o: &IMat) -> IMat {
        assert_eq!(self.n, o.n);
        let mut m = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] = (0..self.n).map(|k| self.a[i][k] * o.a[k][j]).sum();
            }
        }
        m
    }

    /// M v for a column vector v.
    pub fn apply(&self, v: &IVec) -> IVec {
        let mut w = [0; MAX_RANK];
        for i in 0..self.n {
            w[i] = (0..self.n).map(|k| self.a[i][k] * v[k]).sum();
        }
        w
    }

    /// y M for a row vector y.
    pub fn row_apply(&self, y: &IVec) -> IVec {
        let mut w = [0; MAX_RANK];
        for j in 0..self.n {
            w[j] = (0..self.n).map(|k| y[k] * self.a[k][j]).sum();
        }
        w
    }

    /// y M mod m, entries in [0, m).
    pub fn row_apply_mod(&self, y: &IVec, m: i64) -> IVec {
        let mut w = [0; MAX_RANK];
        for j in 0..self.n {
            w[j] = (0..self.n).map(|k| y[k] * self.a[k][j]).sum::<i64>().rem_euclid(m);
        }
        w
    }

    pub fn transpose(&self) -> IMat {
        let mut m = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] = self.a[j][i];
            }
        }
        m
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> IMat {
        let mut m = Self::zero((self.n - 1).max(1));
        if self.n == 1 {
            m.a[0][0] = 1;
            return m;
        }
        let mut r = 0;
        for i in (0..self.n).filter(|&i| i != skip_r) {
            let mut c = 0;
            for j in (0..self.n).filter(|&j| j != skip_c) {
                m.a[r][c] = self.a[i][j];
                c += 1;
            }
            r += 1;
        }
        m
    }

    pub fn det(&self) -> i64 {
        match self.n {
            1 => self.a[0][0],
            2 => self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0],
            _ => (0..self.n)
                .map(|j| {
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * self.a[0][j] * self.minor(0, j).det()
                })
                .sum(),
        }
    }

    /// adj(M), so that M adj(M) = det(M) I.
    pub fn adjugate(&self) -> IMat {
        let mut m = Self::zero(self.n);
        if self.n == 1 {
            m.a[0][0] = 1;
            return m;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                m.a[j][i] = s * self.minor(i, j).det();
            }
        }
        m
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Option<IMat> {
        match self.det() {
            1 => Some(self.adjugate()),
            -1 => Some(self.adjugate().scale(-1)),
            _ => None,
        }
    }

    pub fn scale(&self, c: i64) -> IMat {
        let mut m = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] *= c;
            }
        }
        m
    }

    /// Exact quotient by an integer, if every entry is divisible.
    pub fn div_exact(&self, d: i64) -> Option<IMat> {
        let mut m = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                if self.a[i][j] % d != 0 {
                    return None;
                }
                m.a[i][j] /= d;
            }
        }
        Some(m)
    }
}

pub fn vec_gcd(v: &IVec) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn is_zero(v: &IVec) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Divides by the content and makes the first nonzero entry positive.
/// Returns the normalized vector and the sign that was removed.
pub fn normalize(v: &IVec) -> (IVec, i64) {
    let g = vec_gcd(v);
    assert!(g != 0, "zero vector");
    let mut w = [0; MAX_RANK];
    for i in 0..MAX_RANK {
        w[i] = v[i] / g;
    }
    let s = w.iter().find(|&&x| x != 0).map(|&x| x.signum()).unwrap();
    if s < 0 {
        for x in w.iter_mut() {
            *x = -*x;
        }
    }
    (w, s)
}

pub fn neg(v: &IVec) -> IVec {
    let mut w = *v;
    for x in w.iter_mut() {
        *x = -*x;
    }
    w
}

/// Rank of a list of integer vectors of length n.
pub fn rank(vectors: &[IVec], n: usize) -> usize {
    let mut m: Vec<Vec<i128>> = vectors.iter().map(|v| v[..n].iter().map(|&x| x as i128).collect()).collect();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..n {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
                let g = m[i].iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    m[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

/// Sign of the permutation given as images of 0..k.
pub fn perm_sign(perm: &[usize]) -> i64 {
    let mut seen = vec![false; perm.len()];
    let mut s = 1;
    for i in 0..perm.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            s = -s;
        }
    }
    s
}

/// A matrix in SL(n, Z) whose last row is the given primitive vector.
pub fn complete_to_sl(row: &IVec, n: usize) -> IMat {
    assert_eq!(vec_gcd(row), 1, "row must be primitive");
    // Column operations C with row * C = e_n; then C^{-1} has last row `row`.
    let mut y = *row;
    let mut c = IMat::identity(n);
    let col_op = |c: &mut IMat, y: &mut IVec, dst: usize, src: usize, k: i64| {
        // column dst += k * column src
        y[dst] += k * y[src];
        for i in 0..n {
            let v = c.a[i][dst] + k * c.a[i][src];
            c.a[i][dst] = v;
        }
    };
    let swap = |c: &mut IMat, y: &mut IVec, a: usize, b: usize| {
        y.swap(a, b);
        for i in 0..n {
            c.a[i].swap(a, b);
        }
    };
    // Euclid across positions until a single entry is nonzero.
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| y[i] != 0).collect();
        if nz.len() == 1 {
            let i = nz[0];
            if i != n - 1 {
                swap(&mut c, &mut y, i, n - 1);
            }
            break;
        }
        let (small, _) = nz.iter().map(|&i| (i, y[i].abs())).min_by_key(|e| e.1).unwrap();
        for &i in &nz {
            if i != small {
                let q = y[i].div_euclid(y[small]);
                col_op(&mut c, &mut y, i, small, -q);
            }
        }
    }
    if y[n - 1] == -1 {
        for i in 0..n {
            c.a[i][n - 1] = -c.a[i][n - 1];
        }
    }
    let mut m = c.inverse().expect("column operations are unimodular");
    if m.det() == -1 {
        for j in 0..n {
            m.a[0][j] = -m.a[0][j];
        }
    }
    if n == 1 {
        return IMat::identity(1);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn det_inverse_adjugate() {
        let m = IMat::from_rows(&[vec![2, 1, 0, 0], vec![1, 1, 0, 0], vec![0, 0, 1, 3], vec![0, 0, 0, 1]]);
        assert_eq!(m.det(), 1);
        assert_eq!(m.mul(&m.inverse().unwrap()), IMat::identity(4));
        let s = IMat::from_rows(&[vec![0, -1], vec![1, 0]]);
        assert_eq!(s.inverse().unwrap(), s.scale(-1));
        assert_eq!(perm_sign(&[1, 0, 2]), -1);
        assert_eq!(perm_sign(&[1, 2, 0]), 1);
    }

    proptest! {
        #[test]
        fn completion_is_special_linear(a in -30i64..30, b in -30i64..30, c in -30i64..30, d in -30i64..30) {
            let v = [a, b, c, d];
            prop_assume!(vec_gcd(&v) == 1);
            let m = complete_to_sl(&v, 4);
            prop_assert_eq!(m.det(), 1);
            prop_assert_eq!(m.row(3), v);
            let w = [a, b, 0, 0];
            prop_assume!(vec_gcd(&w) == 1);
            let m2 = complete_to_sl(&w, 2);
            prop_assert_eq!(m2.det(), 1);
            prop_assert_eq!(m2.row(1), w);
        }
    }
}
