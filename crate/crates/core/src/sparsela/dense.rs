use crate::ffield::{Field, PolyRing};

/// A small dense matrix acting on column vectors.
#[derive(Clone, Debug)]
pub struct DenseMatrix<F: Field> {
    field: F,
    nrows: usize,
    ncols: usize,
    data: Vec<Vec<F::Elem>>,
}

impl<F: Field> PartialEq for DenseMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nrows == other.nrows && self.ncols == other.ncols && self.data == other.data
    }
}

impl<F: Field> DenseMatrix<F> {
    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        DenseMatrix { field, nrows: rows.len(), ncols, data: rows }
    }

    pub fn zeros(field: F, nrows: usize, ncols: usize) -> Self {
        let data = vec![vec![field.zero(); ncols]; nrows];
        DenseMatrix { field, nrows, ncols, data }
    }

    pub fn scalar(field: F, n: usize, c: F::Elem) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i][i] = c.clone();
        }
        m
    }

    pub fn identity(field: F, n: usize) -> Self {
        let one = field.one();
        Self::scalar(field, n, one)
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(field: F, cols: &[Vec<F::Elem>], nrows: usize) -> Self {
        let mut m = Self::zeros(field, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..nrows {
                m.data[i][j] = c[i].clone();
            }
        }
        m
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

    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i][j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn transpose(&self) -> Self {
        let data = (0..self.ncols).map(|j| self.column(j)).collect();
        DenseMatrix { field: self.field.clone(), nrows: self.ncols, ncols: self.nrows, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows, "dimension mismatch");
        let f = &self.field;
        let data = self
            .data
            .iter()
            .map(|r| {
                (0..other.ncols)
                    .map(|j| {
                        r.iter()
                            .zip(&other.data)
                            .fold(f.zero(), |acc, (a, row)| f.add(&acc, &f.mul(a, &row[j])))
                    })
                    .collect()
            })
            .collect();
        DenseMatrix { field: f.clone(), nrows: self.nrows, ncols: other.ncols, data }
    }

    pub fn apply(&self, x: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        self.data
            .iter()
            .map(|r| r.iter().zip(x).fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect())
            .collect();
        DenseMatrix { field: f.clone(), nrows: self.nrows, ncols: self.ncols, data }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Some(c) if the matrix is c times the identity.
    pub fn as_scalar(&self) -> Option<F::Elem> {
        if !self.is_square() {
            return None;
        }
        let c = if self.nrows == 0 { self.field.one() } else { self.data[0][0].clone() };
        let ok = (0..self.nrows).all(|i| {
            (0..self.ncols).all(|j| if i == j { self.data[i][j] == c } else { self.field.is_zero(&self.data[i][j]) })
        });
        ok.then_some(c)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..self.nrows).find(|&i| !f.is_zero(&m[i][c])) else { continue };
            m.swap(r, p);
            let inv = f.inv(&m[r][c]).unwrap();
            for x in m[r].iter_mut() {
                *x = f.mul(x, &inv);
            }
            let pivot = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && !f.is_zero(&row[c]) {
                    let s = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x = f.sub(x, &f.mul(&s, y));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (DenseMatrix { field: f.clone(), nrows: self.nrows, ncols: self.ncols, data: m }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : A x = 0}.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![f.zero(); self.ncols];
                v[fc] = f.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(&r.data[i][fc]);
                }
                v
            })
            .collect()
    }

    /// Some x with A x = b, if solvable.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let f = &self.field;
        let aug: Vec<Vec<F::Elem>> = self
            .data
            .iter()
            .zip(b)
            .map(|(r, y)| {
                let mut r = r.clone();
                r.push(y.clone());
                r
            })
            .collect();
        let (r, pivots) = DenseMatrix::from_rows(f.clone(), aug, self.ncols + 1).rref();
        if pivots.last() == Some(&self.ncols) {
            return None;
        }
        let mut x = vec![f.zero(); self.ncols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.data[i][self.ncols].clone();
        }
        Some(x)
    }

    /// det(x I - A), monic, low degree first (Hessenberg reduction).
    pub fn charpoly(&self) -> Vec<F::Elem> {
        assert!(self.is_square());
        let f = &self.field;
        let n = self.nrows;
        let mut h = self.data.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !f.is_zero(&h[i][m - 1])) else { continue };
            if i != m {
                h.swap(i, m);
                for row in h.iter_mut() {
                    row.swap(i, m);
                }
            }
            let inv = f.inv(&h[m][m - 1]).unwrap();
            for i in m + 1..n {
                if f.is_zero(&h[i][m - 1]) {
                    continue;
                }
                let u = f.mul(&h[i][m - 1], &inv);
                for j in 0..n {
                    let t = f.mul(&u, &h[m][j]);
                    h[i][j] = f.sub(&h[i][j], &t);
                }
                for row in h.iter_mut() {
                    let t = f.mul(&u, &row[i]);
                    row[m] = f.add(&row[m], &t);
                }
            }
        }
        let ring = PolyRing::new(f);
        let mut p: Vec<Vec<F::Elem>> = vec![vec![f.one()]];
        for m in 0..n {
            let lin = ring.normalize(vec![f.neg(&h[m][m]), f.one()]);
            let mut next = ring.mul(&lin, &p[m]);
            let mut t = f.one();
            for i in (0..m).rev() {
                t = f.mul(&t, &h[i + 1][i]);
                let c = f.mul(&t, &h[i][m]);
                next = ring.sub(&next, &ring.scale(&p[i], &c));
            }
            p.push(next);
        }
        p.pop().unwrap()
    }
}
