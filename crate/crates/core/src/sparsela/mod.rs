//! Sparse matrices over finite fields: rank, kernels, images, homology
//! quotients with coordinates, and a text persistence format.

mod dense;
mod elim;
mod homology;
mod io;

pub use dense::DenseMatrix;
pub use elim::{image_basis, kernel_basis, rank, Echelon};
pub use homology::QuotientBasis;
pub use io::{decode_elem, encode_elem, load, persist, read_matrix, write_matrix};

use crate::ffield::Field;

#[derive(Debug, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("composite of boundary maps is nonzero ({nnz} nonzero entries)")]
    BrokenComplex { nnz: usize },
    #[error("vector is not a cycle")]
    NotACycle,
    #[error("malformed matrix file: {0}")]
    Malformed(String),
    #[error("matrix file is over GF({file_p}^{file_r}), expected GF({p}^{r})")]
    FieldMismatch { file_p: u64, file_r: usize, p: u64, r: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A sparse vector: (index, value) pairs with strictly increasing indices and
/// no stored zeros.
pub type SparseVec<E> = Vec<(usize, E)>;

/// A sparse matrix stored by rows.
#[derive(Clone, Debug)]
pub struct SparseMatrix<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> PartialEq for SparseMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nrows == other.nrows && self.ncols == other.ncols && self.rows == other.rows
    }
}

/// a + c b for sparse vectors.
pub(crate) fn axpy<F: Field>(f: &F, a: &[(usize, F::Elem)], c: &F::Elem, b: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f.mul(c, &b[j].1)));
            j += 1;
        } else {
            let v = f.add(&a[i].1, &f.mul(c, &b[j].1));
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<F: Field> SparseMatrix<F> {
    pub fn zeros(field: F, nrows: usize, ncols: usize) -> Self {
        SparseMatrix { field, nrows, ncols, rows: vec![Vec::new(); nrows] }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        let rows = (0..n).map(|i| vec![(i, one.clone())]).collect();
        SparseMatrix { field, nrows: n, ncols: n, rows }
    }

    /// Builds a matrix from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(field: F, nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = (usize, usize, F::Elem)>) -> Self {
        let mut rows: Vec<Vec<(usize, F::Elem)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "entry ({r}, {c}) out of range");
            rows[r].push((c, v));
        }
        for row in rows.iter_mut() {
            row.sort_by_key(|e| e.0);
            let mut merged: SparseVec<F::Elem> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv = field.add(lv, &v),
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !field.is_zero(v));
            *row = merged;
        }
        SparseMatrix { field, nrows, ncols, rows }
    }

    pub fn from_dense(field: F, dense: &[Vec<F::Elem>], ncols: usize) -> Self {
        let trip: Vec<_> = dense
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, v.clone())))
            .collect();
        Self::from_triplets(field, dense.len(), ncols, trip)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, F::Elem)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec<F::Elem>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> F::Elem {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &F::Elem)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<SparseVec<F::Elem>> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for (j, v) in r {
                rows[*j].push((i, v.clone()));
            }
        }
        SparseMatrix { field: self.field.clone(), nrows: self.ncols, ncols: self.nrows, rows }
    }

    /// self * other.
    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.ncols != other.nrows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let f = &self.field;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc: SparseVec<F::Elem> = Vec::new();
                for (k, v) in r {
                    acc = axpy(f, &acc, v, &other.rows[*k]);
                }
                acc
            })
            .collect();
        Ok(SparseMatrix { field: f.clone(), nrows: self.nrows, ncols: other.ncols, rows })
    }

    /// self * x for a dense column vector x.
    pub fn apply(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(x.len(), self.ncols);
        let f = &self.field;
        self.rows
            .iter()
            .map(|r| r.iter().fold(f.zero(), |acc, (j, v)| f.add(&acc, &f.mul(v, &x[*j]))))
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<F::Elem>> {
        let mut d = vec![vec![self.field.zero(); self.ncols]; self.nrows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v.clone();
        }
        d
    }
}
