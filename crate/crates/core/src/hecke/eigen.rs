use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{HeckeAlgebra, HeckeError};
use crate::ffield::{Field, PolyRing};
use crate::finder::LocalPoly;
use crate::sparsela::DenseMatrix;

/// a(l, k) for the operators computed; l is full when every T(l, k) with
/// 0 < k < n is known, partial when only T(l, 1) is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenpacket<F: Field> {
    pub n: usize,
    pub values: BTreeMap<(u64, usize), F::Elem>,
}

impl<F: Field> Eigenpacket<F> {
    pub fn new(n: usize) -> Self {
        Eigenpacket { n, values: BTreeMap::new() }
    }

    pub fn get(&self, ell: u64, k: usize) -> Option<&F::Elem> {
        self.values.get(&(ell, k))
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut p: Vec<u64> = self.values.keys().map(|(l, _)| *l).collect();
        p.dedup();
        p
    }

    pub fn is_full(&self, ell: u64) -> bool {
        (1..self.n).all(|k| self.values.contains_key(&(ell, k)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimultaneousEigenspace<F: Field> {
    /// Basis vectors in reduced row echelon form, in H_1 coordinates.
    pub basis: Vec<Vec<F::Elem>>,
    pub packet: Eigenpacket<F>,
}

impl<F: Field> SimultaneousEigenspace<F> {
    pub fn hecke_multiplicity(&self) -> usize {
        self.basis.len()
    }
}

/// The common refinement of the eigenspace decompositions of all stored
/// operators. Every eigenvalue must lie in the field and every operator
/// must act semisimply; otherwise a diagnostic error names the operator.
pub fn simultaneous_eigenspaces<F: Field>(alg: &HeckeAlgebra<F>) -> Result<Vec<SimultaneousEigenspace<F>>, HeckeError> {
    let f = alg.field().clone();
    let dim = alg.dim();
    let n = alg.n;
    let mut rng = ChaCha8Rng::seed_from_u64(0x4845_434b);
    let ring = PolyRing::new(&f);
    let mut spaces: Vec<(DenseMatrix<F>, Eigenpacket<F>)> = vec![(DenseMatrix::identity(f.clone(), dim), Eigenpacket::new(n))];
    if dim == 0 {
        return Ok(Vec::new());
    }
    for op in alg.operators() {
        let mut next = Vec::new();
        for (b, packet) in spaces {
            // columns of b span V; T b = b m
            let tb = op.matrix.mul(&b);
            let cols: Vec<Vec<F::Elem>> = (0..b.ncols())
                .map(|j| b.solve(&tb.column(j)).expect("subspace is invariant under commuting operators"))
                .collect();
            let d = b.ncols();
            let m = DenseMatrix::from_columns(f.clone(), &cols, d);
            let cp = m.charpoly();
            let roots = ring.roots(&cp, &mut rng);
            let mut rest = cp.clone();
            for r in &roots {
                let lin = vec![f.neg(r), f.one()];
                loop {
                    let (q, rem) = ring.divrem(&rest, &lin);
                    if !rem.is_empty() {
                        break;
                    }
                    rest = q;
                }
            }
            if rest.len() > 1 {
                return Err(HeckeError::NonRational { ell: op.ell, k: op.k, degree: rest.len() - 1 });
            }
            let mut total = 0;
            for r in roots {
                let shifted = m.sub(&DenseMatrix::scalar(f.clone(), d, r.clone()));
                let ker = shifted.kernel();
                total += ker.len();
                let vecs: Vec<Vec<F::Elem>> = ker.iter().map(|x| b.apply(x)).collect();
                let mut p = packet.clone();
                p.values.insert((op.ell, op.k), r);
                next.push((DenseMatrix::from_columns(f.clone(), &vecs, dim), p));
            }
            if total != d {
                return Err(HeckeError::NotSemisimple { ell: op.ell, k: op.k });
            }
        }
        spaces = next;
    }
    let mut out: Vec<SimultaneousEigenspace<F>> = spaces
        .into_iter()
        .map(|(b, mut packet)| {
            let (r, piv) = b.transpose().rref();
            let basis = r.rows()[..piv.len()].to_vec();
            for ell in packet.primes() {
                packet.values.insert((ell, 0), f.one());
                if packet.is_full(ell) {
                    packet.values.insert((ell, n), alg.eta(ell));
                }
            }
            SimultaneousEigenspace { basis, packet }
        })
        .collect();
    out.sort_by_cached_key(|s| {
        let key: Vec<Vec<u64>> = s.basis.iter().map(|v| v.iter().flat_map(|x| f.to_coeffs(x)).collect()).collect();
        key
    });
    Ok(out)
}

/// sum_k (-1)^k l^{k(k-1)/2} a(l, k) X^k when l is full, else 1 - a(l, 1) X
/// mod X^2.
pub fn hecke_polynomial<F: Field>(f: &F, packet: &Eigenpacket<F>, ell: u64) -> Option<LocalPoly<F::Elem>> {
    let a1 = packet.get(ell, 1)?;
    if !packet.is_full(ell) {
        return Some(LocalPoly::Partial(f.neg(a1)));
    }
    let n = packet.n;
    let mut c = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let a = match k {
            0 => f.one(),
            _ => packet.get(ell, k)?.clone(),
        };
        let w = f.pow(&f.from_i64((ell % f.characteristic()) as i64), (k * k.saturating_sub(1) / 2) as u64);
        let t = f.mul(&w, &a);
        c.push(if k % 2 == 1 { f.neg(&t) } else { t });
    }
    Some(LocalPoly::Full(PolyRing::new(f).normalize(c)))
}

#[cfg(test)]
mod tests {
    use super::super::HeckeOperator;
    use super::*;
    use crate::dirichlet::DirichletChar;
    use crate::ffield::{Fp, PrimeField};

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn diag(d: &[i64]) -> DenseMatrix<PrimeField> {
        let f = f();
        let mut m = DenseMatrix::zeros(f.clone(), d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, f.elem(x));
        }
        m
    }

    fn alg(dim: usize) -> HeckeAlgebra<PrimeField> {
        HeckeAlgebra::new(4, dim, f(), DirichletChar::trivial(11, 101))
    }

    #[test]
    fn refinement_of_diagonals() {
        let mut a = alg(3);
        a.insert(HeckeOperator { ell: 2, k: 1, matrix: diag(&[1, 1, 2]) }).unwrap();
        a.insert(HeckeOperator { ell: 3, k: 1, matrix: diag(&[5, 6, 6]) }).unwrap();
        let s = simultaneous_eigenspaces(&a).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|e| e.hecke_multiplicity() == 1));

        let mut b = alg(3);
        b.insert(HeckeOperator { ell: 3, k: 1, matrix: diag(&[5, 6, 6]) }).unwrap();
        b.insert(HeckeOperator { ell: 2, k: 1, matrix: diag(&[1, 1, 2]) }).unwrap();
        let t = simultaneous_eigenspaces(&b).unwrap();
        let bases = |v: &[SimultaneousEigenspace<PrimeField>]| v.iter().map(|e| e.basis.clone()).collect::<Vec<_>>();
        assert_eq!(bases(&s), bases(&t));
    }

    #[test]
    fn scalar_operators_give_one_space() {
        let mut a = alg(3);
        a.insert(HeckeOperator { ell: 2, k: 0, matrix: DenseMatrix::identity(f(), 3) }).unwrap();
        a.insert(HeckeOperator { ell: 2, k: 4, matrix: DenseMatrix::identity(f(), 3) }).unwrap();
        let s = simultaneous_eigenspaces(&a).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].hecke_multiplicity(), 3);
    }

    #[test]
    fn conjugated_diagonal_splits() {
        let fld = f();
        let p = DenseMatrix::from_rows(fld.clone(), vec![vec![fld.elem(1), fld.elem(2), fld.elem(0)], vec![fld.elem(0), fld.elem(1), fld.elem(3)], vec![fld.elem(1), fld.elem(0), fld.elem(1)]], 3);
        let pinv = {
            let cols: Vec<Vec<Fp>> = (0..3).map(|j| p.solve(&DenseMatrix::identity(fld.clone(), 3).column(j)).unwrap()).collect();
            DenseMatrix::from_columns(fld.clone(), &cols, 3)
        };
        let m = p.mul(&diag(&[4, 9, 16])).mul(&pinv);
        let mut a = alg(3);
        a.insert(HeckeOperator { ell: 5, k: 1, matrix: m }).unwrap();
        let s = simultaneous_eigenspaces(&a).unwrap();
        let mut vals: Vec<Fp> = s.iter().map(|e| *e.packet.get(5, 1).unwrap()).collect();
        vals.sort();
        assert_eq!(vals, vec![fld.elem(4), fld.elem(9), fld.elem(16)]);
    }

    #[test]
    fn diagnostics() {
        let fld = f();
        let mut a = alg(2);
        // x^2 - 2, irreducible since 2 is a non-residue mod 101
        let rot = DenseMatrix::from_rows(fld.clone(), vec![vec![fld.elem(0), fld.elem(2)], vec![fld.elem(1), fld.elem(0)]], 2);
        a.insert(HeckeOperator { ell: 2, k: 1, matrix: rot }).unwrap();
        assert!(matches!(simultaneous_eigenspaces(&a), Err(HeckeError::NonRational { degree: 2, .. })));
        let mut b = alg(2);
        let jordan = DenseMatrix::from_rows(fld.clone(), vec![vec![fld.elem(1), fld.elem(1)], vec![fld.elem(0), fld.elem(1)]], 2);
        b.insert(HeckeOperator { ell: 2, k: 1, matrix: jordan }).unwrap();
        assert!(matches!(simultaneous_eigenspaces(&b), Err(HeckeError::NotSemisimple { .. })));
        let mut c = alg(2);
        assert!(matches!(c.insert(HeckeOperator { ell: 2, k: 0, matrix: diag(&[1, 2]) }), Err(HeckeError::NotIdentity { .. })));
        assert!(matches!(c.insert(HeckeOperator { ell: 2, k: 4, matrix: diag(&[2, 2]) }), Err(HeckeError::NotCentral { .. })));
        c.insert(HeckeOperator { ell: 2, k: 1, matrix: diag(&[1, 2]) }).unwrap();
        let non = DenseMatrix::from_rows(fld.clone(), vec![vec![fld.elem(0), fld.elem(1)], vec![fld.elem(1), fld.elem(0)]], 2);
        assert!(matches!(c.insert(HeckeOperator { ell: 3, k: 1, matrix: non }), Err(HeckeError::NotCommuting { .. })));
    }

    #[test]
    fn polynomial_of_sum_of_powers() {
        let fld = f();
        let ell = 3u64;
        let mut p = Eigenpacket::<PrimeField>::new(4);
        // e_k of 1, l, l^2, l^3 divided by l^{k(k-1)/2}: the Gaussian binomials.
        for k in 1..4 {
            p.values.insert((ell, k), fld.elem(gaussian(k, 3) as i64));
        }
        p.values.insert((ell, 4), fld.elem(1));
        let LocalPoly::Full(c) = hecke_polynomial(&fld, &p, ell).unwrap() else { panic!() };
        let ring = PolyRing::new(&fld);
        let expect = [1, 3, 9, 27].iter().fold(vec![fld.elem(1)], |acc, &a| ring.mul(&acc, &[fld.elem(1), fld.elem(-a)]));
        assert_eq!(c, expect);
        assert_eq!(*p.get(ell, 1).unwrap(), fld.elem(1 + 3 + 9 + 27));
    }

    fn gaussian(k: usize, q: u64) -> u64 {
        super::super::gaussian_binomial(4, k, q)
    }
}
