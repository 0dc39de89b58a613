use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use rayon::prelude::*;

use super::cones::{closure, facets};
use super::exact::rank;
use super::forms::{perfect_forms, sym_coords};
use super::VoronoiError;
use crate::lattice::{self, IMat, IVec};

/// A Voronoi cell given by its ordered vertex list (one vector per +- pair,
/// first nonzero coordinate positive).
pub type Vertices = Vec<IVec>;

/// A face of a cell class: removing the vertex at `position` gives the cell
/// g . (class `target`), with `sign` relating the two orientations times the
/// boundary sign (-1)^position (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub position: usize,
    pub target: usize,
    pub g: IMat,
    pub sign: i8,
}

/// A class of Voronoi cells modulo SL(n, Z).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellClass {
    pub vertices: Vertices,
    /// Index of the GL(n, Z)-class this SL-class belongs to.
    pub gl_class: usize,
    /// Every element of the stabilizer in SL(n, Z).
    pub stabilizer: Vec<IMat>,
    /// Orientation character on `stabilizer`, elementwise.
    pub orientation: Vec<i8>,
    /// Interior codimension-one faces (empty in degree 0).
    pub faces: Vec<Face>,
}

impl CellClass {
    /// Cone dimension, equal to the number of vertices.
    pub fn dim(&self) -> usize {
        self.vertices.len()
    }

    pub fn orientation_of(&self, g: &IMat) -> Option<i8> {
        self.stabilizer.iter().position(|h| h == g).map(|i| self.orientation[i])
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation.iter().all(|&o| o == 1)
    }
}

/// Cell classes of cone dimension n + k for k = 0, 1, 2 whose interiors
/// meet the positive-definite cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedVoronoiComplex {
    pub n: usize,
    pub degrees: Vec<Vec<CellClass>>,
}

impl TruncatedVoronoiComplex {
    pub fn class_counts(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.len()).collect()
    }
}

fn canon(v: &IVec) -> IVec {
    lattice::normalize(v).0
}

/// Interior iff the vertices span Q^n, i.e. the sum of v v^t is positive
/// definite.
pub fn is_interior(n: usize, cell: &[IVec]) -> bool {
    lattice::rank(cell, n) == n
}

/// Vertex permutation induced by g: g . from[i] = +- to[perm[i]].
pub fn vertex_permutation(g: &IMat, from: &[IVec], to: &[IVec]) -> Option<Vec<usize>> {
    if from.len() != to.len() {
        return None;
    }
    let mut perm = Vec::with_capacity(from.len());
    for v in from {
        let w = canon(&g.apply(v));
        perm.push(to.iter().position(|t| *t == w)?);
    }
    let distinct: HashSet<_> = perm.iter().collect();
    (distinct.len() == perm.len()).then_some(perm)
}

fn invariant(n: usize, cell: &[IVec]) -> Vec<i64> {
    let mut dets: Vec<i64> = cell
        .iter()
        .combinations(n)
        .map(|c| {
            let cols: Vec<IVec> = c.into_iter().copied().collect();
            IMat::from_columns(n, &cols).det().abs()
        })
        .collect();
    dets.sort_unstable();
    dets
}

/// All g in GL(n, Z) with g(+-c1) = +-c2 (all of them, or the first found).
pub fn equivalences(n: usize, c1: &[IVec], c2: &[IVec], first_only: bool) -> Vec<IMat> {
    if c1.len() != c2.len() || invariant(n, c1) != invariant(n, c2) {
        return Vec::new();
    }
    // n independent vertices of c1
    let mut base: Vec<usize> = Vec::new();
    for i in 0..c1.len() {
        let mut cand: Vec<IVec> = base.iter().map(|&j| c1[j]).collect();
        cand.push(c1[i]);
        if lattice::rank(&cand, n) == cand.len() {
            base.push(i);
        }
        if base.len() == n {
            break;
        }
    }
    if base.len() < n {
        return Vec::new();
    }
    let b1 = IMat::from_columns(n, &base.iter().map(|&i| c1[i]).collect::<Vec<_>>());
    let det1 = b1.det();
    let adj1 = b1.adjugate();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for targets in (0..c2.len()).permutations(n) {
        for signs in 0..(1u32 << n) {
            let cols: Vec<IVec> = targets
                .iter()
                .enumerate()
                .map(|(k, &t)| if signs >> k & 1 == 1 { lattice::neg(&c2[t]) } else { c2[t] })
                .collect();
            let b2 = IMat::from_columns(n, &cols);
            let Some(g) = b2.mul(&adj1).div_exact(det1) else { continue };
            if g.det().abs() != 1 || vertex_permutation(&g, c1, c2).is_none() {
                continue;
            }
            if seen.insert(g) {
                out.push(g);
                if first_only {
                    return out;
                }
            }
        }
    }
    out
}

pub fn cell_equivalence(n: usize, c1: &[IVec], c2: &[IVec]) -> Option<IMat> {
    equivalences(n, c1, c2, true).into_iter().next()
}

/// The stabilizer of a cell in GL(n, Z) with its orientation character.
pub fn stabilizer(n: usize, cell: &[IVec]) -> (Vec<IMat>, Vec<i8>) {
    let mut g = equivalences(n, cell, cell, false);
    g.sort();
    let o = g
        .iter()
        .map(|h| lattice::perm_sign(&vertex_permutation(h, cell, cell).unwrap()) as i8)
        .collect();
    (g, o)
}

struct GlClass {
    vertices: Vertices,
    /// SL classes: indices into the degree's class list; a second entry means
    /// the class splits, the second representative being d . vertices.
    sl: Vec<usize>,
    /// An element of the GL stabilizer of determinant -1, if any.
    flip: Option<IMat>,
}

fn reflection(n: usize) -> IMat {
    let mut d = vec![1; n];
    d[0] = -1;
    IMat::diag(&d)
}

/// Faces of the perfect cones of rank n with cone dimension in n..=n+2 that
/// meet the interior, verified to be simplices.
fn interior_faces(n: usize) -> Result<Vec<Vertices>, VoronoiError> {
    let mut out = Vec::new();
    for q in perfect_forms(n)? {
        let mins = q.minimal_vectors();
        let coords: Vec<_> = mins.iter().map(|v| sym_coords(n, v)).collect();
        let fs = facets(&coords);
        for size in n..=n + 2 {
            for subset in (0..mins.len()).combinations(size) {
                let rows: Vec<_> = subset.iter().map(|&i| coords[i].clone()).collect();
                if rank(&rows) < size {
                    continue;
                }
                let s: BTreeSet<usize> = subset.iter().copied().collect();
                let cl = closure(&fs, mins.len(), &s);
                if cl != s {
                    let cl_rows: Vec<_> = cl.iter().map(|&i| coords[i].clone()).collect();
                    let r = rank(&cl_rows);
                    if r <= n + 2 && r < cl.len() {
                        return Err(VoronoiError::NotSimplex { dim: r, vertices: cl.len() });
                    }
                    continue;
                }
                let mut cell: Vertices = subset.iter().map(|&i| mins[i]).collect();
                cell.sort_by(|a, b| b.cmp(a));
                if is_interior(n, &cell) {
                    out.push(cell);
                }
            }
        }
    }
    Ok(out)
}

/// Enumerates the classes modulo SL(n, Z) of interior Voronoi cells of cone
/// dimension n, n + 1, n + 2, with stabilizers, orientation characters and
/// face incidences.
pub fn enumerate_cell_classes(n: usize) -> Result<TruncatedVoronoiComplex, VoronoiError> {
    if !(2..=4).contains(&n) {
        return Err(VoronoiError::BadRank(n));
    }
    let faces = interior_faces(n)?;
    let d = reflection(n);
    let mut gl: Vec<Vec<GlClass>> = (0..3).map(|_| Vec::new()).collect();
    let mut degrees: Vec<Vec<CellClass>> = (0..3).map(|_| Vec::new()).collect();
    for cell in faces {
        let k = cell.len() - n;
        if gl[k].iter().any(|c| cell_equivalence(n, &c.vertices, &cell).is_some()) {
            continue;
        }
        let (stab, orient) = stabilizer(n, &cell);
        let flip = stab.iter().find(|g| g.det() == -1).copied();
        let sl_part = |conj: Option<&IMat>| -> (Vec<IMat>, Vec<i8>) {
            stab.iter()
                .zip(&orient)
                .filter(|(g, _)| g.det() == 1)
                .map(|(g, o)| (conj.map_or(*g, |c| c.mul(g).mul(c)), *o))
                .unzip()
        };
        let gl_index = gl[k].len();
        let mut sl = vec![degrees[k].len()];
        let (s, o) = sl_part(None);
        degrees[k].push(CellClass { vertices: cell.clone(), gl_class: gl_index, stabilizer: s, orientation: o, faces: vec![] });
        if flip.is_none() {
            let image: Vertices = cell.iter().map(|v| canon(&d.apply(v))).collect();
            let (s, o) = sl_part(Some(&d));
            sl.push(degrees[k].len());
            degrees[k].push(CellClass { vertices: image, gl_class: gl_index, stabilizer: s, orientation: o, faces: vec![] });
        }
        gl[k].push(GlClass { vertices: cell, sl, flip });
    }
    for k in 1..3 {
        let lower = &gl[k - 1];
        let lower_sl = &degrees[k - 1];
        let computed: Vec<Vec<Face>> = degrees[k]
            .par_iter()
            .map(|class| faces_of(n, class, lower, lower_sl, &d))
            .collect::<Result<_, _>>()?;
        for (class, f) in degrees[k].iter_mut().zip(computed) {
            class.faces = f;
        }
    }
    Ok(TruncatedVoronoiComplex { n, degrees })
}

fn faces_of(n: usize, class: &CellClass, lower: &[GlClass], lower_sl: &[CellClass], d: &IMat) -> Result<Vec<Face>, VoronoiError> {
    let mut out = Vec::new();
    for i in 0..class.vertices.len() {
        let face: Vertices = class.vertices.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
        if !is_interior(n, &face) {
            continue;
        }
        let (glc, g) = lower
            .iter()
            .find_map(|c| cell_equivalence(n, &c.vertices, &face).map(|g| (c, g)))
            .ok_or(VoronoiError::MissingFace)?;
        let (target, g) = match (g.det(), glc.sl.len()) {
            (1, _) => (glc.sl[0], g),
            (_, 1) => (glc.sl[0], g.mul(&glc.flip.unwrap())),
            _ => (glc.sl[1], g.mul(d)),
        };
        let perm = vertex_permutation(&g, &lower_sl[target].vertices, &face).ok_or(VoronoiError::MissingFace)?;
        let boundary_sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
        out.push(Face { position: i, target, g, sign: (boundary_sign * lattice::perm_sign(&perm)) as i8 });
    }
    Ok(out)
}
