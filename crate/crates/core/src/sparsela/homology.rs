use super::elim::{image_basis, kernel_basis, Echelon};
use super::{LinalgError, SparseMatrix, SparseVec};
use crate::ffield::Field;

/// A basis x_1, ..., x_h of ker A / im B together with the echelon data
/// needed to write any cycle in that basis.
#[derive(Clone, Debug)]
pub struct QuotientBasis<F: Field> {
    a: SparseMatrix<F>,
    echelon: Echelon<F>,
    /// For each echelon row, the homology basis index it carries, if any.
    tags: Vec<Option<usize>>,
    basis: Vec<SparseVec<F::Elem>>,
}

impl<F: Field> QuotientBasis<F> {
    /// Homology of C_2 --B--> C_1 --A--> C_0 at C_1 (column-vector convention).
    pub fn new(a: &SparseMatrix<F>, b: &SparseMatrix<F>) -> Result<Self, LinalgError> {
        if a.ncols() != b.nrows() {
            return Err(LinalgError::Dimension(format!(
                "A is {}x{}, B is {}x{}",
                a.nrows(),
                a.ncols(),
                b.nrows(),
                b.ncols()
            )));
        }
        let ab = a.mul(b)?;
        if !ab.is_zero() {
            return Err(LinalgError::BrokenComplex { nnz: ab.nnz() });
        }
        let field = a.field().clone();
        let mut echelon = Echelon::new(field, a.ncols());
        let mut tags = Vec::new();
        for v in image_basis(b) {
            if echelon.insert(&v).is_some() {
                tags.push(None);
            }
        }
        let mut basis = Vec::new();
        for z in kernel_basis(a) {
            let (rem, _) = echelon.reduce(&z);
            if !rem.is_empty() {
                basis.push(rem.clone());
                echelon.insert_reduced(rem);
                tags.push(Some(basis.len() - 1));
            }
        }
        Ok(QuotientBasis { a: a.clone(), echelon, tags, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.a.ncols()
    }

    /// The representative cycles x_i.
    pub fn basis(&self) -> &[SparseVec<F::Elem>] {
        &self.basis
    }

    /// Coefficients c with y = sum c_i x_i modulo im B.
    pub fn express(&self, y: &[(usize, F::Elem)]) -> Result<Vec<F::Elem>, LinalgError> {
        let f = self.a.field();
        let mut dense = vec![f.zero(); self.ambient_dim()];
        for (j, v) in y {
            dense[*j] = v.clone();
        }
        if self.a.apply(&dense).iter().any(|c| !f.is_zero(c)) {
            return Err(LinalgError::NotACycle);
        }
        let (rem, used) = self.echelon.reduce(y);
        debug_assert!(rem.is_empty());
        let mut c = vec![f.zero(); self.dim()];
        for (k, coef) in used {
            if let Some(i) = self.tags[k] {
                // x_i is stored unnormalized; the echelon row is x_i / lead(x_i).
                let lead = self.basis[i][0].1.clone();
                c[i] = f.div(&coef, &lead).unwrap();
            }
        }
        Ok(c)
    }
}
