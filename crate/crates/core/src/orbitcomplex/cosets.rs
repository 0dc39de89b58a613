use num_integer::Integer;

use crate::lattice::{self, IMat, IVec};

const NONE: u32 = u32::MAX;

/// Right cosets of Gamma_0(N) in SL(n, Z), indexed by P^{n-1}(Z/N).
///
/// Point i is the lexicographically smallest vector of its class under
/// multiplication by units, and points are numbered in lexicographic order.
#[derive(Clone, Debug)]
pub struct CosetTable {
    n: usize,
    level: u64,
    points: Vec<IVec>,
    lifts: Vec<IMat>,
    /// For every vector of (Z/N)^n (as a base-N index): its point and the
    /// unit l with vector = l * point, or NONE if it is not primitive.
    lookup: Vec<(u32, u32)>,
}

/// #P^{n-1}(Z/N) = N^{n-1} prod_{q | N} (1 + 1/q + ... + 1/q^{n-1}).
pub fn projective_count(level: u64, n: usize) -> u64 {
    let mut count = 1u64;
    let mut m = level;
    let mut q = 2;
    while m > 1 {
        if m.is_multiple_of(q) {
            let mut e = 0;
            while m.is_multiple_of(q) {
                m /= q;
                e += 1;
            }
            let geometric: u64 = (0..n as u32).map(|i| q.pow(i)).sum();
            count *= q.pow((e * (n as u32 - 1)).saturating_sub(n as u32 - 1)) * geometric;
        }
        q += 1;
    }
    count
}

impl CosetTable {
    pub fn new(level: u64, n: usize) -> Self {
        assert!(level >= 1 && (1..=lattice::MAX_RANK).contains(&n));
        let big_n = level as i64;
        let total = (level as usize).pow(n as u32);
        let units: Vec<i64> = (0..big_n.max(1)).filter(|a| a.gcd(&big_n) == 1).collect();
        let mut lookup = vec![(NONE, NONE); total];
        let mut points = Vec::new();
        for idx in 0..total {
            if lookup[idx].0 != NONE {
                continue;
            }
            let v = unindex(idx, level, n);
            let g = v[..n].iter().fold(big_n, |acc, &x| acc.gcd(&x));
            if g != 1 {
                continue;
            }
            let id = points.len() as u32;
            for &l in &units {
                let w = scale_mod(&v, l, big_n, n);
                lookup[index(&w, level, n)] = (id, l as u32);
            }
            points.push(v);
        }
        let lifts = points.iter().map(|p| lattice::complete_to_sl(&primitive_lift(p, big_n, n), n)).collect();
        CosetTable { n, level, points, lifts, lookup }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &IVec {
        &self.points[i]
    }

    pub fn points(&self) -> &[IVec] {
        &self.points
    }

    /// A matrix of SL(n, Z) whose bottom row reduces to point i.
    pub fn lift(&self, i: usize) -> &IMat {
        &self.lifts[i]
    }

    /// (point, unit l) with v = l * point mod N, for v primitive mod N.
    pub fn locate(&self, v: &IVec) -> Option<(usize, i64)> {
        let m = self.level as i64;
        let mut w = [0; lattice::MAX_RANK];
        for i in 0..self.n {
            w[i] = v[i].rem_euclid(m);
        }
        let (p, l) = self.lookup[index(&w, self.level, self.n)];
        (p != NONE).then_some((p as usize, l as i64))
    }

    /// The coset of g: the point of its bottom row and the unit factor.
    pub fn coset_of(&self, g: &IMat) -> (usize, i64) {
        self.locate(&g.row(self.n - 1)).expect("bottom row of an SL matrix is primitive")
    }
}

fn index(v: &IVec, level: u64, n: usize) -> usize {
    v[..n].iter().fold(0usize, |acc, &x| acc * level as usize + x as usize)
}

fn unindex(mut idx: usize, level: u64, n: usize) -> IVec {
    let mut v = [0; lattice::MAX_RANK];
    for i in (0..n).rev() {
        v[i] = (idx % level as usize) as i64;
        idx /= level as usize;
    }
    v
}

fn scale_mod(v: &IVec, l: i64, m: i64, n: usize) -> IVec {
    let mut w = [0; lattice::MAX_RANK];
    for i in 0..n {
        w[i] = (v[i] * l).rem_euclid(m);
    }
    w
}

/// An integer vector with gcd 1 congruent to v mod N (v primitive mod N).
fn primitive_lift(v: &IVec, m: i64, n: usize) -> IVec {
    let mut w = *v;
    if lattice::is_zero(&w) {
        w[n - 1] = m;
    }
    let rest = w[1..n].iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if rest == 0 {
        // Only the first entry is nonzero; move some weight into the last.
        w[n - 1] += m;
        return primitive_lift(&w, m, n);
    }
    let mut k = 0;
    while w[0].gcd(&rest) != 1 {
        w[0] += m;
        k += 1;
        assert!(k < 10_000, "no primitive lift found");
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_lifts() {
        assert_eq!(CosetTable::new(1, 4).len(), 1);
        assert_eq!(CosetTable::new(2, 2).len(), 3);
        for (n, level) in [(4, 11), (4, 12), (3, 9), (2, 16), (4, 1), (4, 4)] {
            let t = CosetTable::new(level, n);
            assert_eq!(t.len() as u64, projective_count(level, n), "N={level} n={n}");
            for i in 0..t.len() {
                let r = t.lift(i);
                assert_eq!(r.det(), 1);
                assert_eq!(t.coset_of(r), (i, 1 % level as i64));
            }
        }
        assert_eq!(projective_count(11, 4), 1464);
        assert_eq!(projective_count(41, 4), 70644);
    }
}
