use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{axpy, SparseMatrix, SparseVec};
use crate::ffield::Field;

/// Rank by Markowitz-style sparse elimination: the shortest remaining row is
/// the pivot row, and within it the column with fewest remaining entries is
/// the pivot column (ties to the lowest index). Switches to dense
/// elimination once the active part fills in.
pub fn rank<F: Field>(a: &SparseMatrix<F>) -> usize {
    let f = a.field();
    let ncols = a.ncols();
    let mut rows: Vec<SparseVec<F::Elem>> = a.rows().to_vec();
    let mut done = vec![false; rows.len()];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut col_count = vec![0usize; ncols];
    let mut heap = BinaryHeap::new();
    let mut active_nnz = 0usize;
    for (i, r) in rows.iter().enumerate() {
        for (j, _) in r {
            col_rows[*j].push(i as u32);
            col_count[*j] += 1;
        }
        active_nnz += r.len();
        heap.push(Reverse((r.len(), i)));
    }
    let mut rank = 0;
    let mut active_rows = rows.len();
    while let Some(Reverse((len, i))) = heap.pop() {
        if done[i] || rows[i].len() != len {
            continue;
        }
        done[i] = true;
        active_rows -= 1;
        if len == 0 {
            continue;
        }
        let pivot_row = std::mem::take(&mut rows[i]);
        let (pc, pv) = pivot_row
            .iter()
            .min_by_key(|(j, _)| (col_count[*j], *j))
            .map(|(j, v)| (*j, v.clone()))
            .unwrap();
        let inv = f.inv(&pv).expect("nonzero pivot");
        for (j, _) in &pivot_row {
            col_count[*j] -= 1;
        }
        active_nnz -= pivot_row.len();
        let mut targets = std::mem::take(&mut col_rows[pc]);
        targets.sort_unstable();
        targets.dedup();
        for &t in &targets {
            let t = t as usize;
            if done[t] {
                continue;
            }
            let Ok(k) = rows[t].binary_search_by_key(&pc, |e| e.0) else { continue };
            let c = f.neg(&f.mul(&rows[t][k].1, &inv));
            let old = std::mem::take(&mut rows[t]);
            let new = axpy(f, &old, &c, &pivot_row);
            let (mut x, mut y) = (0, 0);
            while x < old.len() || y < new.len() {
                if y == new.len() || (x < old.len() && old[x].0 < new[y].0) {
                    col_count[old[x].0] -= 1;
                    x += 1;
                } else if x == old.len() || new[y].0 < old[x].0 {
                    col_count[new[y].0] += 1;
                    col_rows[new[y].0].push(t as u32);
                    y += 1;
                } else {
                    x += 1;
                    y += 1;
                }
            }
            active_nnz = active_nnz + new.len() - old.len();
            heap.push(Reverse((new.len(), t)));
            rows[t] = new;
        }
        rank += 1;
        let active_cols = ncols - rank;
        if active_rows > 64 && active_cols > 0 && active_nnz * 8 > active_rows * active_cols {
            let rest: Vec<SparseVec<F::Elem>> = rows
                .into_iter()
                .zip(&done)
                .filter(|(r, d)| !**d && !r.is_empty())
                .map(|(r, _)| r)
                .collect();
            return rank + dense_rank(f, rest, ncols);
        }
    }
    rank
}

fn dense_rank<F: Field>(f: &F, rows: Vec<SparseVec<F::Elem>>, ncols: usize) -> usize {
    let mut used = vec![usize::MAX; ncols];
    let mut k = 0;
    for r in &rows {
        for (j, _) in r {
            if used[*j] == usize::MAX {
                used[*j] = k;
                k += 1;
            }
        }
    }
    let mut m: Vec<Vec<F::Elem>> = rows
        .into_iter()
        .map(|r| {
            let mut d = vec![f.zero(); k];
            for (j, v) in r {
                d[used[j]] = v;
            }
            d
        })
        .collect();
    dense_rank_in_place(f, &mut m, k)
}

fn dense_rank_in_place<F: Field>(f: &F, m: &mut [Vec<F::Elem>], ncols: usize) -> usize {
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..m.len()).find(|&i| !f.is_zero(&m[i][c])) else { continue };
            m.swap(r, p);
            let inv = f.inv(&m[r][c]).unwrap();
            let pivot: Vec<F::Elem> = m[r].iter().map(|x| f.mul(x, &inv)).collect();
            m[r + 1..].iter_mut().for_each(|row| {
                if !f.is_zero(&row[c]) {
                    let s = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
                        *x = f.sub(x, &f.mul(&s, y));
                    }
                }
            });
            m[r] = pivot;
            r += 1;
        }
        r
}

/// An echelon form built incrementally: each inserted row is reduced against
/// all earlier rows, so reduction in insertion order is exact.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    dim: usize,
    rows: Vec<(usize, SparseVec<F::Elem>)>,
    pivot_of: Vec<Option<usize>>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, dim: usize) -> Self {
        Echelon { field, dim, rows: Vec::new(), pivot_of: vec![None; dim] }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, k: usize) -> &[(usize, F::Elem)] {
        &self.rows[k].1
    }

    /// Reduces v against the stored rows; returns the remainder and the
    /// multiples of each row that were subtracted (v = remainder + sum c_k row_k).
    pub fn reduce(&self, v: &[(usize, F::Elem)]) -> (SparseVec<F::Elem>, Vec<(usize, F::Elem)>) {
        let f = &self.field;
        let mut dense = vec![f.zero(); self.dim];
        for (j, x) in v {
            dense[*j] = x.clone();
        }
        let mut used = Vec::new();
        for (k, (pc, row)) in self.rows.iter().enumerate() {
            if f.is_zero(&dense[*pc]) {
                continue;
            }
            let c = dense[*pc].clone();
            for (j, x) in row {
                dense[*j] = f.sub(&dense[*j], &f.mul(&c, x));
            }
            used.push((k, c));
        }
        let rem = dense.into_iter().enumerate().filter(|(_, x)| !f.is_zero(x)).collect();
        (rem, used)
    }

    /// Inserts v if independent; returns the index of the new row.
    pub fn insert(&mut self, v: &[(usize, F::Elem)]) -> Option<usize> {
        let (rem, _) = self.reduce(v);
        self.insert_reduced(rem)
    }

    /// Inserts a vector already reduced against all rows, normalizing so
    /// that its pivot entry is 1.
    pub(crate) fn insert_reduced(&mut self, rem: SparseVec<F::Elem>) -> Option<usize> {
        let f = &self.field;
        let (pc, pv) = rem.first().cloned()?;
        let inv = f.inv(&pv).unwrap();
        let row = rem.into_iter().map(|(j, x)| (j, f.mul(&x, &inv))).collect();
        self.pivot_of[pc] = Some(self.rows.len());
        self.rows.push((pc, row));
        Some(self.rows.len() - 1)
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(v).0.is_empty()
    }
}

/// Basis of the right kernel {x : A x = 0}, as sparse vectors of length
/// ncols(A).
pub fn kernel_basis<F: Field>(a: &SparseMatrix<F>) -> Vec<SparseVec<F::Elem>> {
    // Row-reduce the columns of A while tracking combinations.
    let f = a.field();
    let at = a.transpose();
    let mut ech = Echelon::new(f.clone(), a.nrows());
    let mut combos: Vec<SparseVec<F::Elem>> = Vec::new();
    let mut out = Vec::new();
    for (i, col) in at.rows().iter().enumerate() {
        let (rem, used) = ech.reduce(col);
        // col - sum c_k row_k = rem, with row_k = combos[k] applied to columns.
        let mut comb: SparseVec<F::Elem> = vec![(i, f.one())];
        for (k, c) in used {
            comb = axpy(f, &comb, &f.neg(&c), &combos[k]);
        }
        if rem.is_empty() {
            out.push(comb);
        } else {
            let inv = f.inv(&rem[0].1).unwrap();
            let comb = comb.into_iter().map(|(j, x)| (j, f.mul(&x, &inv))).collect();
            ech.insert_reduced(rem);
            combos.push(comb);
        }
    }
    out
}

/// Basis of the column space of A, as sparse vectors of length nrows(A).
pub fn image_basis<F: Field>(a: &SparseMatrix<F>) -> Vec<SparseVec<F::Elem>> {
    let mut ech = Echelon::new(a.field().clone(), a.nrows());
    for col in a.transpose().rows() {
        ech.insert(col);
    }
    (0..ech.len()).map(|k| ech.row(k).to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{Fp, PrimeField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_oracle_rank(p: u32, m: &[Vec<u32>]) -> usize {
        let mut m: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
        let p = p as u64;
        let ncols = m.first().map_or(0, |r| r.len());
        let mut r = 0;
        for c in 0..ncols {
            if let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) {
                m.swap(r, piv);
                let inv = (0..p).find(|x| x * m[r][c] % p == 1).unwrap();
                for i in 0..m.len() {
                    if i != r && m[i][c] != 0 {
                        let s = m[i][c] * inv % p;
                        for j in 0..ncols {
                            m[i][j] = (m[i][j] + p * p - s * m[r][j]) % p;
                        }
                    }
                }
                r += 1;
            }
        }
        r
    }

    fn random_sparse(rng: &mut ChaCha8Rng, f: &PrimeField, n: usize, m: usize, density: f64) -> SparseMatrix<PrimeField> {
        let mut trip = Vec::new();
        for i in 0..n {
            for j in 0..m {
                if rng.gen_bool(density) {
                    trip.push((i, j, Fp(rng.gen_range(1..f.p()))));
                }
            }
        }
        SparseMatrix::from_triplets(f.clone(), n, m, trip)
    }

    #[test]
    fn rank_matches_dense_oracle() {
        let f = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, m, d) in [(50, 50, 0.05), (50, 50, 0.5), (200, 120, 0.03), (30, 80, 0.1), (120, 90, 0.2)] {
            let a = random_sparse(&mut rng, &f, n, m, d);
            let oracle: Vec<Vec<u32>> = a.to_dense().iter().map(|r| r.iter().map(|x| x.0).collect()).collect();
            assert_eq!(rank(&a), dense_oracle_rank(101, &oracle));
            assert_eq!(rank(&a), rank(&a.transpose()));
        }
    }

    #[test]
    fn kernel_and_image() {
        let f = PrimeField::new(101).unwrap();
        assert!(kernel_basis(&SparseMatrix::identity(f.clone(), 5)).is_empty());
        let a = SparseMatrix::from_triplets(f.clone(), 2, 3, [(0, 0, Fp(1)), (0, 1, Fp(1)), (1, 2, Fp(3))]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let a = random_sparse(&mut rng, &f, 40, 60, 0.08);
            let k = kernel_basis(&a);
            assert_eq!(k.len() + rank(&a), 60);
            for v in &k {
                let mut x = vec![Fp(0); 60];
                for (j, c) in v {
                    x[*j] = *c;
                }
                assert!(a.apply(&x).iter().all(|c| c.0 == 0));
            }
            assert_eq!(image_basis(&a).len(), rank(&a));
        }
    }
}
