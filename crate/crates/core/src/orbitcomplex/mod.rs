//! Gamma_0(N)-orbits of Voronoi cells, their local representations, the
//! E^1 term with its differentials over a finite field, and H_1.
//!
//! A cell orbit is a pair (class sigma, coset point y) standing for the cell
//! r sigma with r a lift of y. In the induced module the relations are
//! [l y] = eta(l) [y] and [y h] (x) sigma = Z_sigma(h) [y] (x) sigma for h in
//! the stabilizer of sigma, and the boundary of [y] (x) sigma is
//! sum_i s_i [y g_i] (x) tau_i over the faces g_i tau_i of sigma.

mod cosets;

use std::fmt::Write as _;

use rayon::prelude::*;

pub use cosets::{projective_count, CosetTable};

use crate::dirichlet::DirichletChar;
use crate::ffield::{Fp, PrimeField};
use crate::lattice::IMat;
use crate::sparsela::{self, LinalgError, QuotientBasis, SparseMatrix};
use crate::voronoi::TruncatedVoronoiComplex;

#[derive(Debug, thiserror::Error)]
pub enum OrbitError {
    #[error("composite differential is nonzero ({nnz} entries)")]
    NotAComplex { nnz: usize },
    #[error("{0} is not in SL(n, Z)")]
    NotSl(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The Gamma_0(N)-orbit of the cell r sigma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellOrbit {
    pub degree: usize,
    pub class: usize,
    /// Index of the coset point; `representative` lifts it.
    pub point: usize,
    pub representative: IMat,
    /// G_{sigma_1} = r (stabilizer of the coset in G_sigma) r^{-1}, inside
    /// Gamma_0(N).
    pub stabilizer: Vec<IMat>,
    /// eta(g_nn) Z(g) on `stabilizer`, elementwise.
    pub local_rep: Vec<Fp>,
    pub alive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Slot {
    orbit: u32,
    /// Coefficient c with [point] (x) sigma = c [rep point] (x) sigma.
    coeff: Fp,
    /// Index of h in G_sigma with rep * h = l * point for a unit l.
    h: u32,
}

/// Orbit bookkeeping for one cell class.
#[derive(Clone, Debug)]
struct ClassOrbits {
    slots: Vec<Slot>,
    /// (representative point, alive) per orbit.
    orbits: Vec<(usize, bool)>,
}

/// The cell-orbit structure for (N, eta) on a truncated Voronoi complex.
#[derive(Clone, Debug)]
pub struct OrbitStructure {
    cosets: CosetTable,
    eta: DirichletChar,
    field: PrimeField,
    complex: TruncatedVoronoiComplex,
    classes: Vec<Vec<ClassOrbits>>,
    /// Per degree, per class: alive orbit -> E^1 basis index.
    alive_index: Vec<Vec<Vec<Option<usize>>>>,
    /// Per degree: (class, orbit) of each E^1 basis vector.
    basis: Vec<Vec<(usize, usize)>>,
}

/// Result of `decompose`: g = gamma r h.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub gamma: IMat,
    pub point: usize,
    pub r: IMat,
    pub h: IMat,
}

impl OrbitStructure {
    pub fn new(complex: &TruncatedVoronoiComplex, eta: &DirichletChar) -> Result<Self, OrbitError> {
        let level = eta.modulus();
        let field = PrimeField::new(eta.p() as u64).expect("character values lie in a prime field");
        let cosets = CosetTable::new(level, complex.n);
        let classes: Vec<Vec<ClassOrbits>> = complex
            .degrees
            .iter()
            .map(|deg| deg.par_iter().map(|c| class_orbits(&cosets, eta, &field, &c.stabilizer, &c.orientation)).collect())
            .collect();
        let mut alive_index = Vec::new();
        let mut basis = Vec::new();
        for deg in &classes {
            let mut idx = Vec::new();
            let mut b = Vec::new();
            for (ci, c) in deg.iter().enumerate() {
                idx.push(
                    c.orbits
                        .iter()
                        .enumerate()
                        .map(|(oi, &(_, alive))| {
                            alive.then(|| {
                                b.push((ci, oi));
                                b.len() - 1
                            })
                        })
                        .collect(),
                );
            }
            alive_index.push(idx);
            basis.push(b);
        }
        Ok(OrbitStructure { cosets, eta: eta.clone(), field, complex: complex.clone(), classes, alive_index, basis })
    }

    pub fn level(&self) -> u64 {
        self.cosets.level()
    }

    pub fn cosets(&self) -> &CosetTable {
        &self.cosets
    }

    pub fn eta(&self) -> &DirichletChar {
        &self.eta
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn complex(&self) -> &TruncatedVoronoiComplex {
        &self.complex
    }

    /// Number of orbits (alive or not) per degree.
    pub fn orbit_counts(&self) -> Vec<usize> {
        self.classes.iter().map(|d| d.iter().map(|c| c.orbits.len()).sum()).collect()
    }

    /// dim E^1_{k,0} per degree (alive orbits).
    pub fn dims(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.len()).collect()
    }

    /// Full description of every orbit in a degree, in basis order for the
    /// alive ones followed by the dead ones.
    pub fn orbits(&self, degree: usize) -> Vec<CellOrbit> {
        let mut out = Vec::new();
        for (ci, c) in self.classes[degree].iter().enumerate() {
            for (oi, _) in c.orbits.iter().enumerate() {
                out.push(self.cell_orbit(degree, ci, oi));
            }
        }
        out.sort_by_key(|o| (!o.alive, o.class, o.point));
        out
    }

    fn cell_orbit(&self, degree: usize, class: usize, orbit: usize) -> CellOrbit {
        let cc = &self.complex.degrees[degree][class];
        let (point, alive) = self.classes[degree][class].orbits[orbit];
        let y = self.cosets.point(point);
        let m = self.level() as i64;
        let r = *self.cosets.lift(point);
        let r_inv = r.inverse().expect("lift is unimodular");
        let mut stabilizer = Vec::new();
        let mut local_rep = Vec::new();
        for (h, z) in cc.stabilizer.iter().zip(&cc.orientation) {
            let (p, l) = self.cosets.locate(&h.row_apply_mod(y, m)).unwrap();
            if p == point {
                stabilizer.push(r.mul(h).mul(&r_inv));
                local_rep.push(self.field.mulp(self.eta.eval(l), self.field.elem(*z as i64)));
            }
        }
        CellOrbit { degree, class, point, representative: r, stabilizer, local_rep, alive }
    }

    /// Basis index of the orbit of (class, point) in a degree, with the
    /// coefficient c such that [point] (x) sigma = c [rep] (x) sigma; None if
    /// the orbit is dead.
    pub fn locate(&self, degree: usize, class: usize, point: usize) -> Option<(usize, Fp)> {
        let s = self.classes[degree][class].slots[point];
        self.alive_index[degree][class][s.orbit as usize].map(|i| (i, s.coeff))
    }

    /// The (class, representative point) of each basis vector in a degree.
    pub fn basis(&self, degree: usize) -> Vec<(usize, usize)> {
        self.basis[degree].iter().map(|&(c, o)| (c, self.classes[degree][c].orbits[o].0)).collect()
    }

    /// Writes g = gamma r h with gamma in Gamma_0(N), r the lift of the
    /// representative point of the orbit of g sigma, and h in G_sigma.
    pub fn decompose(&self, g: &IMat, degree: usize, class: usize) -> Result<Decomposition, OrbitError> {
        if g.det() != 1 {
            return Err(OrbitError::NotSl(format!("{g:?}")));
        }
        let (p, _) = self.cosets.coset_of(g);
        let slot = self.classes[degree][class].slots[p];
        let (point, _) = self.classes[degree][class].orbits[slot.orbit as usize];
        let h = self.complex.degrees[degree][class].stabilizer[slot.h as usize];
        let r = *self.cosets.lift(point);
        let gamma = g.mul(&h.inverse().unwrap()).mul(&r.inverse().unwrap());
        Ok(Decomposition { gamma, point, r, h })
    }

    /// The differential from degree k to degree k - 1 stored source x
    /// target (rows indexed by degree-k basis vectors).
    pub fn boundary_matrix(&self, k: usize) -> SparseMatrix<PrimeField> {
        let f = &self.field;
        let m = self.level() as i64;
        let rows: Vec<Vec<(usize, usize, Fp)>> = self.basis[k]
            .par_iter()
            .enumerate()
            .map(|(row, &(ci, oi))| {
                let (point, _) = self.classes[k][ci].orbits[oi];
                let y = self.cosets.point(point);
                let mut out = Vec::new();
                for face in &self.complex.degrees[k][ci].faces {
                    let (p, l) = self.cosets.locate(&face.g.row_apply_mod(y, m)).unwrap();
                    if let Some((col, c)) = self.locate(k - 1, face.target, p) {
                        let v = f.mulp(f.mulp(self.eta.eval(l), c), f.elem(face.sign as i64));
                        out.push((row, col, v));
                    }
                }
                out
            })
            .collect();
        SparseMatrix::from_triplets(f.clone(), self.basis[k].len(), self.basis[k - 1].len(), rows.into_iter().flatten())
    }

    /// The E^1 term with both differentials, checking d1 d2 = 0.
    pub fn e1_term(&self) -> Result<E1Term, OrbitError> {
        let d1 = self.boundary_matrix(1);
        let d2 = self.boundary_matrix(2);
        let composite = d2.mul(&d1)?;
        if !composite.is_zero() {
            return Err(OrbitError::NotAComplex { nnz: composite.nnz() });
        }
        Ok(E1Term { dims: self.dims(), d1, d2 })
    }

    pub fn export_orbits(&self) -> String {
        let mut s = format!("ORBITS {} {}\n", self.level(), self.eta.label());
        for k in 0..self.classes.len() {
            for o in self.orbits(k) {
                let y = self.cosets.point(o.point);
                let coords: Vec<String> = y[..self.complex.n].iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "{k} {} {} {} {}", o.class, coords.join(","), o.stabilizer.len(), u8::from(o.alive));
            }
        }
        s
    }
}

fn class_orbits(cosets: &CosetTable, eta: &DirichletChar, f: &PrimeField, stab: &[IMat], orient: &[i8]) -> ClassOrbits {
    const UNSET: u32 = u32::MAX;
    let m = cosets.level() as i64;
    let mut slots = vec![Slot { orbit: UNSET, coeff: Fp(0), h: 0 }; cosets.len()];
    let mut orbits = Vec::new();
    for start in 0..cosets.len() {
        if slots[start].orbit != UNSET {
            continue;
        }
        let id = orbits.len() as u32;
        let y0 = cosets.point(start);
        let mut alive = true;
        for (hi, (h, z)) in stab.iter().zip(orient).enumerate() {
            let (p, l) = cosets.locate(&h.row_apply_mod(y0, m)).unwrap();
            // y0 h = l P  =>  [P] (x) s = eta(l)^{-1} Z(h) [y0] (x) s
            let coeff = f.mulp(f.invp(eta.eval(l)).unwrap(), f.elem(*z as i64));
            let slot = &mut slots[p];
            if slot.orbit == UNSET {
                *slot = Slot { orbit: id, coeff, h: hi as u32 };
            } else if slot.coeff != coeff {
                alive = false;
            }
        }
        orbits.push((start, alive));
    }
    ClassOrbits { slots, orbits }
}

/// E^1_{k,0} for k = 0, 1, 2 with d1: E_1 -> E_0 and d2: E_2 -> E_1, both
/// stored source x target.
#[derive(Clone, Debug)]
pub struct E1Term {
    pub dims: Vec<usize>,
    pub d1: SparseMatrix<PrimeField>,
    pub d2: SparseMatrix<PrimeField>,
}

impl E1Term {
    /// ker d1 / im d2.
    pub fn homology_h1(&self) -> Result<QuotientBasis<PrimeField>, OrbitError> {
        Ok(QuotientBasis::new(&self.d1.transpose(), &self.d2.transpose())?)
    }

    /// dim H_1 = dim E_1 - rank d1 - rank d2.
    pub fn h1_dim(&self) -> usize {
        self.dims[1] - sparsela::rank(&self.d1) - sparsela::rank(&self.d2)
    }
}

/// Builds the E^1 term for (N, eta) and returns it with the orbit structure.
pub fn build(complex: &TruncatedVoronoiComplex, eta: &DirichletChar) -> Result<(OrbitStructure, E1Term), OrbitError> {
    let s = OrbitStructure::new(complex, eta)?;
    let e1 = s.e1_term()?;
    Ok((s, e1))
}
