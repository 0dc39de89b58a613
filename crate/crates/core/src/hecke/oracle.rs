use super::{single_coset_reps, HeckeError, HeckeOperator};
use crate::ffield::{Field, Fp, PrimeField};
use crate::lattice::{self, IMat, IVec};
use crate::orbitcomplex::OrbitStructure;
use crate::sharbly::{theta, Sharbly, SharblyChain};
use crate::sparsela::{DenseMatrix, QuotientBasis};
use crate::voronoi::{equivalences, vertex_permutation};

/// Replaces a sharbly cycle by a homologous one supported on Voronoi
/// sharblies (coefficients are residues mod p).
pub trait ReductionOracle {
    fn reduce(&self, chain: &SharblyChain) -> Result<SharblyChain, HeckeError>;
}

/// Accepts chains that are already Voronoi-supported and rejects all
/// others.
pub struct TrivialOracle<'a> {
    pub structure: &'a OrbitStructure,
}

impl ReductionOracle for TrivialOracle<'_> {
    fn reduce(&self, chain: &SharblyChain) -> Result<SharblyChain, HeckeError> {
        for (s, _) in chain.terms() {
            locate_cell(self.structure, s).ok_or(HeckeError::NotReduced)?;
        }
        Ok(chain.clone())
    }
}

/// (class, g in SL(n, Z), sign) with s = sign * (g . class) as oriented
/// cells, for a sharbly of degree 1 supported on a Voronoi cell.
fn locate_cell(structure: &OrbitStructure, s: &Sharbly) -> Option<(usize, IMat, i64)> {
    let n = structure.complex().n;
    let cols = s.columns();
    for (ci, class) in structure.complex().degrees.get(1)?.iter().enumerate() {
        if class.dim() != cols.len() {
            continue;
        }
        if let Some(g) = equivalences(n, &class.vertices, cols, false).into_iter().find(|g| g.det() == 1) {
            let perm = vertex_permutation(&g, &class.vertices, cols)?;
            return Some((ci, g, lattice::perm_sign(&perm)));
        }
    }
    None
}

/// The Voronoi sharbly of the cell g . sigma, with its orientation sign.
fn translate(n: usize, g: &IMat, vertices: &[IVec]) -> Option<(Sharbly, i64)> {
    let image: Vec<IVec> = vertices.iter().map(|v| g.apply(v)).collect();
    theta(n, &image).ok().flatten()
}

/// T(l, k) on a basis of H_1: translates each basis cycle by the single
/// coset representatives (twisted by eta of their bottom-right entries),
/// reduces through the oracle, and expresses the result in the basis.
pub fn hecke_matrix_via_oracle(
    structure: &OrbitStructure,
    h1: &QuotientBasis<PrimeField>,
    ell: u64,
    k: usize,
    oracle: &dyn ReductionOracle,
) -> Result<HeckeOperator<PrimeField>, HeckeError> {
    let f = structure.field().clone();
    let p = f.characteristic() as i64;
    let n = structure.complex().n;
    let eta = structure.eta();
    let basis1 = structure.basis(1);
    let reps = single_coset_reps(n, ell, k);
    let mut columns = Vec::with_capacity(h1.dim());
    for cycle in h1.basis() {
        let mut chain = SharblyChain::new();
        for (j, c) in cycle {
            let (class, point) = basis1[*j];
            let r = structure.cosets().lift(point);
            let verts = &structure.complex().degrees[1][class].vertices;
            for g in &reps {
                let twist = eta.eval(g.get(n - 1, n - 1));
                let coeff = f.mulp(*c, twist).0 as i64;
                if let Some((s, sign)) = translate(n, &g.mul(r), verts) {
                    chain.add_term(s, sign * coeff);
                }
            }
        }
        let reduced = oracle.reduce(&chain)?;
        let mut y: Vec<(usize, Fp)> = Vec::new();
        for (s, c) in reduced.terms() {
            let (class, g, sign) = locate_cell(structure, s).ok_or(HeckeError::NotReduced)?;
            let (point, unit) = structure.cosets().coset_of(&g);
            if let Some((idx, coeff)) = structure.locate(1, class, point) {
                let v = f.mulp(f.mulp(f.elem((c * sign).rem_euclid(p)), coeff), eta.eval(unit));
                y.push((idx, v));
            }
        }
        y.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, Fp)> = Vec::new();
        for (i, v) in y {
            match merged.last_mut() {
                Some((j, w)) if *j == i => *w = f.addp(*w, v),
                _ => merged.push((i, v)),
            }
        }
        merged.retain(|(_, v)| v.0 != 0);
        columns.push(h1.express(&merged).map_err(|_| HeckeError::NotReduced)?);
    }
    Ok(HeckeOperator { ell, k, matrix: DenseMatrix::from_columns(f, &columns, h1.dim()) })
}
