//! Hecke operators T(l, k): single-coset representatives, validated
//! operator sets on H_1, simultaneous eigenspaces, eigenpackets and Hecke
//! polynomials.

mod cosets;
mod eigen;
mod io;
mod oracle;

pub use cosets::{gaussian_binomial, single_coset_reps};
pub use eigen::{hecke_polynomial, simultaneous_eigenspaces, Eigenpacket, SimultaneousEigenspace};
pub use io::{read_hecke, read_packet, write_hecke, write_packet, HeckeHeader};
pub use oracle::{hecke_matrix_via_oracle, ReductionOracle, TrivialOracle};

use crate::dirichlet::DirichletChar;
use crate::ffield::Field;
use crate::sparsela::DenseMatrix;

#[derive(Debug, thiserror::Error)]
pub enum HeckeError {
    #[error("T({ell},{k}) has dimension {got}, expected {expected}")]
    Dimension { ell: u64, k: usize, got: usize, expected: usize },
    #[error("T({ell},0) is not the identity")]
    NotIdentity { ell: u64 },
    #[error("T({ell},{n}) is not eta({ell}) times the identity")]
    NotCentral { ell: u64, n: usize },
    #[error("T({a_ell},{a_k}) and T({b_ell},{b_k}) do not commute")]
    NotCommuting { a_ell: u64, a_k: usize, b_ell: u64, b_k: usize },
    #[error("T({ell},{k}) has eigenvalues outside the field (charpoly factor of degree {degree})")]
    NonRational { ell: u64, k: usize, degree: usize },
    #[error("T({ell},{k}) is not semisimple")]
    NotSemisimple { ell: u64, k: usize },
    #[error("index k = {k} out of range for rank {n}")]
    BadIndex { k: usize, n: usize },
    #[error("chain is not supported on Voronoi cells")]
    NotReduced,
    #[error("malformed Hecke file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// The matrix of T(l, k) on a fixed basis of H_1.
#[derive(Clone, Debug, PartialEq)]
pub struct HeckeOperator<F: Field> {
    pub ell: u64,
    pub k: usize,
    pub matrix: DenseMatrix<F>,
}

/// Operators for one (N, eta), each validated on insertion.
#[derive(Clone, Debug)]
pub struct HeckeAlgebra<F: Field> {
    n: usize,
    dim: usize,
    field: F,
    eta: DirichletChar,
    ops: Vec<HeckeOperator<F>>,
}

impl<F: Field> HeckeAlgebra<F> {
    pub fn new(n: usize, dim: usize, field: F, eta: DirichletChar) -> Self {
        HeckeAlgebra { n, dim, field, eta, ops: Vec::new() }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[HeckeOperator<F>] {
        &self.ops
    }

    /// eta(l) in the working field.
    pub fn eta(&self, ell: u64) -> F::Elem {
        self.field.from_prime(self.eta.eval(ell as i64))
    }

    /// Validates and stores T(l, k): dimension, T(l,0) = I, T(l,n) =
    /// eta(l) I, and commutation with every stored operator.
    pub fn insert(&mut self, op: HeckeOperator<F>) -> Result<(), HeckeError> {
        let (ell, k) = (op.ell, op.k);
        if k > self.n {
            return Err(HeckeError::BadIndex { k, n: self.n });
        }
        let m = &op.matrix;
        if m.nrows() != self.dim || m.ncols() != self.dim {
            return Err(HeckeError::Dimension { ell, k, got: m.nrows().max(m.ncols()), expected: self.dim });
        }
        let f = m.field();
        if k == 0 && m.as_scalar().is_none_or(|c| !f.is_one(&c)) && self.dim > 0 {
            return Err(HeckeError::NotIdentity { ell });
        }
        if k == self.n && self.dim > 0 && m.as_scalar() != Some(self.eta(ell)) {
            return Err(HeckeError::NotCentral { ell, n: self.n });
        }
        for other in &self.ops {
            if !m.commutes_with(&other.matrix) {
                return Err(HeckeError::NotCommuting { a_ell: ell, a_k: k, b_ell: other.ell, b_k: other.k });
            }
        }
        self.ops.retain(|o| (o.ell, o.k) != (ell, k));
        self.ops.push(op);
        self.ops.sort_by_key(|o| (o.ell, o.k));
        Ok(())
    }
}
