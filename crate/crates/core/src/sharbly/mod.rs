//! Sharblies: symbols [v_1, ..., v_{n+k}] of nonzero integer vectors modulo
//! permutation (with sign), degeneracy and rescaling, with the boundary map.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::lattice::{self, IMat, IVec};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SharblyError {
    #[error("zero vector in sharbly")]
    ZeroVector,
    #[error("boundary of a degree-0 sharbly")]
    DegreeZero,
    #[error("{got} columns cannot form a sharbly in rank {n}")]
    TooFewColumns { n: usize, got: usize },
    #[error("cell with {0} vertices is not a simplex of its dimension")]
    NotSimplex(usize),
}

/// A sharbly in canonical form: primitive columns with first nonzero entry
/// positive, in decreasing lexicographic order (so e_1, ..., e_n is sorted),
/// pairwise distinct and spanning Q^n.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sharbly {
    n: usize,
    cols: Vec<IVec>,
}

impl fmt::Debug for Sharbly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<&[i64]> = self.cols.iter().map(|c| &c[..self.n]).collect();
        write!(f, "{cols:?}")
    }
}

impl Sharbly {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree k, where the sharbly has n + k columns.
    pub fn degree(&self) -> usize {
        self.cols.len() - self.n
    }

    pub fn columns(&self) -> &[IVec] {
        &self.cols
    }

    /// g [v_1, ...] = [g v_1, ...], canonicalized.
    pub fn act(&self, g: &IMat) -> Option<(Sharbly, i64)> {
        let cols: Vec<IVec> = self.cols.iter().map(|c| g.apply(c)).collect();
        canonicalize(self.n, &cols).expect("invertible action keeps columns nonzero")
    }
}

/// Canonical form of [v_1, ..., v_{n+k}]: Some((sharbly, sign)) or None for
/// the zero class (columns not spanning, or two columns proportional).
pub fn canonicalize(n: usize, raw: &[IVec]) -> Result<Option<(Sharbly, i64)>, SharblyError> {
    if raw.len() < n {
        return Err(SharblyError::TooFewColumns { n, got: raw.len() });
    }
    if raw.iter().any(lattice::is_zero) {
        return Err(SharblyError::ZeroVector);
    }
    let cols: Vec<IVec> = raw.iter().map(|v| lattice::normalize(v).0).collect();
    let mut idx: Vec<usize> = (0..cols.len()).collect();
    idx.sort_by(|&a, &b| cols[b].cmp(&cols[a]));
    if idx.windows(2).any(|w| cols[w[0]] == cols[w[1]]) {
        return Ok(None);
    }
    if lattice::rank(&cols, n) < n {
        return Ok(None);
    }
    let sign = lattice::perm_sign(&idx);
    let cols = idx.iter().map(|&i| cols[i]).collect();
    Ok(Some((Sharbly { n, cols }, sign)))
}

/// An integer linear combination of canonical sharblies.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SharblyChain {
    terms: BTreeMap<Sharbly, i64>,
}

impl SharblyChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, s: Sharbly, c: i64) {
        if c == 0 {
            return;
        }
        match self.terms.entry(s) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    /// Adds c [cols] after canonicalization.
    pub fn add_raw(&mut self, n: usize, cols: &[IVec], c: i64) -> Result<(), SharblyError> {
        if let Some((s, sign)) = canonicalize(n, cols)? {
            self.add_term(s, sign * c);
        }
        Ok(())
    }

    pub fn add_chain(&mut self, other: &SharblyChain, c: i64) {
        for (s, v) in &other.terms {
            self.add_term(s.clone(), c * v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Sharbly, i64)> {
        self.terms.iter().map(|(s, c)| (s, *c))
    }

    pub fn coefficient(&self, s: &Sharbly) -> i64 {
        self.terms.get(s).copied().unwrap_or(0)
    }

    pub fn boundary(&self) -> Result<SharblyChain, SharblyError> {
        let mut out = SharblyChain::new();
        for (s, c) in &self.terms {
            out.add_chain(&boundary(s)?, *c);
        }
        Ok(out)
    }
}

/// sum_{i=1}^{n+k} (-1)^i [v_1, ..., \hat v_i, ..., v_{n+k}].
pub fn boundary(s: &Sharbly) -> Result<SharblyChain, SharblyError> {
    if s.degree() == 0 {
        return Err(SharblyError::DegreeZero);
    }
    let mut out = SharblyChain::new();
    for i in 0..s.cols.len() {
        let face: Vec<IVec> = s.cols.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
        // 1-based index i + 1
        let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
        out.add_raw(s.n, &face, sign)?;
    }
    Ok(out)
}

/// The Voronoi sharbly of a simplicial cell given by its ordered vertices:
/// [v_1, ..., v_m] with m = n + k and k <= 2.
pub fn theta(n: usize, vertices: &[IVec]) -> Result<Option<(Sharbly, i64)>, SharblyError> {
    let forms: Vec<[i64; 10]> = vertices.iter().map(|v| rank_one(n, v)).collect();
    if vertices.len() > n + 2 || sym_rank(&forms) < vertices.len() {
        return Err(SharblyError::NotSimplex(vertices.len()));
    }
    canonicalize(n, vertices)
}

/// Upper-triangular entries of v v^t.
pub(crate) fn rank_one(n: usize, v: &IVec) -> [i64; 10] {
    let mut out = [0; 10];
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            out[k] = v[i] * v[j];
            k += 1;
        }
    }
    out
}

fn sym_rank(forms: &[[i64; 10]]) -> usize {
    let mut m: Vec<Vec<i128>> = forms.iter().map(|f| f.iter().map(|&x| x as i128).collect()).collect();
    let mut r = 0;
    for c in 0..10 {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                for j in 0..10 {
                    m[i][j] = m[i][j] * a - m[r][j] * b;
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IVec {
        let mut out = [0; 4];
        out[..x.len()].copy_from_slice(x);
        out
    }

    #[test]
    fn relations() {
        let (s, sign) = canonicalize(2, &[v(&[2, 0]), v(&[0, 1])]).unwrap().unwrap();
        assert_eq!(sign, 1);
        assert_eq!(s.columns(), &[v(&[1, 0]), v(&[0, 1])]);
        let (t, sign2) = canonicalize(2, &[v(&[0, 1]), v(&[1, 0])]).unwrap().unwrap();
        assert_eq!(t, s);
        assert_eq!(sign2, -sign);
        assert!(canonicalize(2, &[v(&[1, 0]), v(&[2, 0])]).unwrap().is_none());
        assert!(canonicalize(2, &[v(&[1, 0]), v(&[-3, 0]), v(&[0, 1])]).unwrap().is_none());
        assert_eq!(canonicalize(2, &[v(&[0, 0]), v(&[1, 0])]), Err(SharblyError::ZeroVector));
    }

    #[test]
    fn boundary_of_triangle() {
        let (e1, e2, e12) = (v(&[1, 0]), v(&[0, 1]), v(&[1, 1]));
        let (s, sign) = canonicalize(2, &[e1, e2, e12]).unwrap().unwrap();
        let mut got = boundary(&s).unwrap();
        got.add_chain(&SharblyChain::new(), 1);
        let mut want = SharblyChain::new();
        want.add_raw(2, &[e2, e12], -sign).unwrap();
        want.add_raw(2, &[e1, e12], sign).unwrap();
        want.add_raw(2, &[e1, e2], -sign).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn theta_rejects_non_simplex() {
        let cols = [v(&[1, 0]), v(&[0, 1]), v(&[1, 1]), v(&[1, -1])];
        assert!(matches!(theta(2, &cols), Err(SharblyError::NotSimplex(4))));
        assert!(theta(2, &cols[..3]).unwrap().is_some());
        assert!(theta(4, &[v(&[1, 0, 0, 0]), v(&[0, 1, 0, 0]), v(&[0, 0, 1, 0]), v(&[1, 1, 1, 0])]).unwrap().is_none());
    }
}
