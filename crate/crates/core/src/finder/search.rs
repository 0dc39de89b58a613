use std::collections::{BTreeMap, HashMap, HashSet};

use itertools::Itertools;
use rayon::prelude::*;

use super::{LocalPoly, PolySystem, SystemError};
use crate::constituents::{Base, Constituent, ConstituentError, Database, GaloisKey};
use crate::dirichlet::{cyclotomic_power, DirichletChar};
use crate::ffield::{is_prime, ExtField, Field, Fp, Fq, PolyRing};
use crate::hecke::{hecke_polynomial, Eigenpacket};

#[derive(Debug, thiserror::Error)]
pub enum FinderError {
    #[error("prime {0} divides pN")]
    BadPrime(u64),
    #[error("eigenspace system has degree {0}, expected 4")]
    Degree(usize),
    #[error("nebentype has modulus {got}, expected {expected}")]
    Nebentype { got: u64, expected: u64 },
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Constituent(#[from] ConstituentError),
}

/// Shape of an assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    Gl3,
    W2,
    W3,
    W4,
    FourChars,
    Other,
}

/// A direct sum of constituents matching an eigenspace system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    /// Sorted constituents.
    pub constituents: Vec<Constituent>,
    pub ht_ok: bool,
    pub det_ok: bool,
    pub pattern: Pattern,
}

/// The candidates and all matching direct sums for one eigenspace.
#[derive(Debug, Clone)]
pub struct FinderOutcome {
    pub candidates: Vec<Constituent>,
    pub assignments: Vec<Assignment>,
    pub unique: bool,
    /// More than one assignment, all with equal polynomials at every prime
    /// below the coincidence bound where data exists.
    pub coincident: bool,
    /// Extra primes whose T(l, 1) eigenvalues would tell the assignments apart.
    pub separating_primes: Vec<u64>,
}

/// Y^i mod Q for i = deg Q ..= 4, and Q itself, at one prime.
#[derive(Debug, Clone)]
struct LocalBase {
    rems: Vec<Vec<Fq>>,
}

#[derive(Debug, Clone)]
struct BaseData {
    base: Base,
    degree: usize,
    local: Vec<LocalBase>,
}

/// Matches eigenspace systems against a constituent database over a fixed
/// prime set L.
#[derive(Debug, Clone)]
pub struct Finder<'a> {
    db: &'a Database,
    eta: DirichletChar,
    primes: Vec<u64>,
    multisets: bool,
    bound: u64,
    bases: Vec<BaseData>,
    /// chi(l) l^w indexed [prime][4 chi + w].
    scalars: Vec<Vec<Fp>>,
}

fn rem_table(f: &ExtField, q: &[Fq]) -> LocalBase {
    let ring = PolyRing::new(f);
    let d = q.len() - 1;
    let rems = (d..=4)
        .map(|i| {
            let mut y = vec![f.zero(); i + 1];
            y[i] = f.one();
            let mut r = ring.rem(&y, q);
            r.resize(d, f.zero());
            r
        })
        .collect();
    LocalBase { rems }
}

impl<'a> Finder<'a> {
    pub fn new(db: &'a Database, eta: &DirichletChar, primes: &[u64]) -> Result<Self, FinderError> {
        let n = db.level();
        let p = db.field().p() as u64;
        if eta.modulus() != n {
            return Err(FinderError::Nebentype { got: eta.modulus(), expected: n });
        }
        if let Some(&bad) = primes.iter().find(|&&l| n.is_multiple_of(l) || l == p || !is_prime(l)) {
            return Err(FinderError::BadPrime(bad));
        }
        let mut primes = primes.to_vec();
        primes.sort_unstable();
        primes.dedup();
        let f = db.field();
        let mut all_bases = vec![Base::One];
        all_bases.extend((0..db.reductions().len()).map(Base::Newform));
        all_bases.extend((0..db.reductions().len()).map(Base::Sym2));
        all_bases.extend((0..db.gl3_tables().len()).map(Base::Gl3));
        let bases = all_bases
            .into_par_iter()
            .filter(|&b| primes.iter().all(|&l| db.has_data(b, l)))
            .map(|base| {
                let local = primes.iter().map(|&l| rem_table(f, &db.base_poly(base, l).unwrap())).collect();
                BaseData { base, degree: db.base_degree(base), local }
            })
            .collect();
        let scalars = primes
            .iter()
            .map(|&l| (0..db.characters().len()).flat_map(|chi| (0..4).map(move |w| db.twist_scalar(chi, w, l))).collect())
            .collect();
        Ok(Finder { db, eta: eta.clone(), primes, multisets: false, bound: 1000, bases, scalars })
    }

    /// Allow a constituent to occur more than once in a sum.
    pub fn with_multisets(mut self, yes: bool) -> Self {
        self.multisets = yes;
        self
    }

    /// Primes below which coincidences are checked.
    pub fn with_coincidence_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self
    }

    pub fn database(&self) -> &Database {
        self.db
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn eta(&self) -> &DirichletChar {
        &self.eta
    }

    /// The full system of a constituent on the given primes.
    pub fn constituent_system(&self, c: &Constituent, primes: &[u64]) -> Result<PolySystem<ExtField>, FinderError> {
        let mut s = PolySystem::new(self.db.field().clone(), self.db.degree(c));
        for &l in primes {
            s.insert_full(l, self.db.frob_poly(c, l)?)?;
        }
        Ok(s)
    }

    /// Product of the Frobenius polynomials of a sum at one prime.
    pub fn sum_poly(&self, cs: &[Constituent], ell: u64) -> Result<Vec<Fq>, FinderError> {
        let f = self.db.field();
        let ring = PolyRing::new(f);
        cs.iter().try_fold(vec![f.one()], |acc, c| Ok(ring.mul(&acc, &self.db.frob_poly(c, ell)?)))
    }

    /// Every constituent whose system divides the eigenspace system at its
    /// full entries in L; partial entries never exclude a constituent.
    pub fn candidate_list(&self, sys: &PolySystem<ExtField>) -> Vec<Constituent> {
        let f = self.db.field();
        let fp = f.prime_field();
        let full: Vec<(usize, &Vec<Fq>)> = self
            .primes
            .iter()
            .enumerate()
            .filter_map(|(i, l)| match sys.get(*l) {
                Some(LocalPoly::Full(c)) => Some((i, c)),
                _ => None,
            })
            .collect();
        let ntw = self.db.characters().len() * 4;
        let mut out: Vec<Constituent> = self
            .bases
            .par_iter()
            .flat_map_iter(|b| {
                let mut alive: Vec<usize> = (0..ntw).collect();
                for &(pi, poly) in &full {
                    let mut poly = poly.clone();
                    poly.resize(5, f.zero());
                    let loc = &b.local[pi];
                    let d = b.degree;
                    // m[i - d][j] = p_i (Y^i mod Q)_j
                    let m: Vec<Vec<Fq>> = (d..=4).map(|i| loc.rems[i - d].iter().map(|r| f.mul(&poly[i], r)).collect()).collect();
                    let mut cache: HashMap<Fp, bool> = HashMap::new();
                    alive.retain(|&t| {
                        let s = self.scalars[pi][t];
                        *cache.entry(s).or_insert_with(|| {
                            let u = fp.invp(s).unwrap();
                            let upow: Vec<Fp> = std::iter::successors(Some(Fp(1)), |x| Some(fp.mulp(*x, u))).take(5).collect();
                            (0..d).all(|j| {
                                let mut acc = f.scale_prime(&poly[j], upow[j]);
                                for i in d..=4 {
                                    acc = f.add(&acc, &f.scale_prime(&m[i - d][j], upow[i]));
                                }
                                f.is_zero(&acc)
                            })
                        })
                    });
                    if alive.is_empty() {
                        break;
                    }
                }
                alive.into_iter().map(move |t| Constituent { base: b.base, chi: t / 4, w: (t % 4) as u32 })
            })
            .collect();
        out.sort_by_cached_key(|c| (std::cmp::Reverse(self.db.degree(c)), self.db.label(c), *c));
        out
    }

    /// All sums of candidates with total degree 4 whose product equals the
    /// eigenspace system on L.
    pub fn find(&self, sys: &PolySystem<ExtField>) -> Result<FinderOutcome, FinderError> {
        if sys.degree() != 4 {
            return Err(FinderError::Degree(sys.degree()));
        }
        let target = sys.restrict(&self.primes);
        let primes = target.primes();
        let full_primes: Vec<u64> = target.entries().filter(|(_, p)| p.is_full()).map(|(l, _)| l).collect();
        let candidates = self.candidate_list(&target);
        let systems: Vec<PolySystem<ExtField>> =
            candidates.iter().map(|c| self.constituent_system(c, &primes)).collect::<Result<_, _>>()?;
        let mut found = Vec::new();
        self.dfs(&systems, 0, &target, &mut Vec::new(), &mut found);
        let mut assignments: Vec<Assignment> = found
            .into_iter()
            .map(|idx| {
                let mut cs: Vec<Constituent> = idx.iter().map(|&i| candidates[i]).collect();
                cs.sort();
                self.annotate(cs, &full_primes)
            })
            .collect::<Result<_, _>>()?;
        assignments.sort_by(|a, b| a.constituents.cmp(&b.constituents));
        assignments.dedup_by(|a, b| a.constituents == b.constituents);
        let unique = assignments.len() == 1;
        let (coincident, separating_primes) = if assignments.len() > 1 { self.compare(&assignments)? } else { (false, Vec::new()) };
        Ok(FinderOutcome { candidates, assignments, unique, coincident, separating_primes })
    }

    fn dfs(&self, systems: &[PolySystem<ExtField>], start: usize, rem: &PolySystem<ExtField>, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem.degree() == 0 {
            let f = self.db.field();
            let one = rem.entries().all(|(_, p)| match p {
                LocalPoly::Full(c) => c.len() == 1 && f.is_one(&c[0]),
                LocalPoly::Partial(c) => f.is_zero(c),
            });
            if one {
                out.push(chosen.clone());
            }
            return;
        }
        for j in start..systems.len() {
            if systems[j].degree() > rem.degree() {
                continue;
            }
            if let Ok(q) = rem.quotient(&systems[j]) {
                chosen.push(j);
                self.dfs(systems, if self.multisets { j } else { j + 1 }, &q, chosen, out);
                chosen.pop();
            }
        }
    }

    /// Checks HT numbers, the determinant at the given primes and the shape.
    pub fn annotate(&self, constituents: Vec<Constituent>, det_primes: &[u64]) -> Result<Assignment, FinderError> {
        let ht_ok = self.ht_ok(&constituents);
        let det_ok = self.det_ok(&constituents, det_primes)?;
        let pattern = classify_pattern(self.db, &constituents);
        Ok(Assignment { constituents, ht_ok, det_ok, pattern })
    }

    /// Sorted concatenated HT numbers are 0, 1, 2, 3.
    pub fn ht_ok(&self, cs: &[Constituent]) -> bool {
        let mut h: Vec<u32> = cs.iter().flat_map(|c| self.db.hodge_tate(c)).collect();
        h.sort_unstable();
        h == [0, 1, 2, 3]
    }

    /// The X^4 coefficient of the product is l^6 eta(l) at every given prime.
    pub fn det_ok(&self, cs: &[Constituent], primes: &[u64]) -> Result<bool, FinderError> {
        let f = self.db.field();
        let fp = f.prime_field();
        if cs.iter().map(|c| self.db.degree(c)).sum::<usize>() != 4 {
            return Ok(false);
        }
        for &l in primes {
            let poly = self.sum_poly(cs, l)?;
            let want = fp.mulp(cyclotomic_power(fp, 6, l), self.eta.eval(l as i64));
            if poly.len() != 5 || poly[4] != f.from_prime(want) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Primes below the bound, off pN and outside L, where every
    /// constituent of the given sums has data.
    fn check_primes<'b>(&self, sums: impl Iterator<Item = &'b [Constituent]> + Clone) -> Vec<u64> {
        let n = self.db.level();
        let p = self.db.field().p() as u64;
        (2..self.bound)
            .filter(|&l| is_prime(l) && !n.is_multiple_of(l) && l != p)
            .filter(|&l| sums.clone().all(|cs| cs.iter().all(|c| self.db.has_data(c.base, l))))
            .collect()
    }

    fn compare(&self, assignments: &[Assignment]) -> Result<(bool, Vec<u64>), FinderError> {
        let sums: Vec<&[Constituent]> = assignments.iter().map(|a| a.constituents.as_slice()).collect();
        let primes = self.check_primes(sums.iter().copied());
        let f = self.db.field();
        let polys: Vec<BTreeMap<u64, Vec<Fq>>> = sums
            .iter()
            .map(|cs| primes.iter().map(|&l| Ok((l, self.sum_poly(cs, l)?))).collect::<Result<_, FinderError>>())
            .collect::<Result<_, _>>()?;
        let coincident = polys.iter().all(|p| *p == polys[0]);
        let mut open: HashSet<(usize, usize)> = (0..sums.len()).tuple_combinations().collect();
        let mut separating = Vec::new();
        for &l in primes.iter().filter(|l| !self.primes.contains(l)) {
            if open.is_empty() {
                break;
            }
            let lin = |i: usize| polys[i][&l].get(1).cloned().unwrap_or_else(|| f.zero());
            let split: Vec<(usize, usize)> = open.iter().copied().filter(|&(i, j)| lin(i) != lin(j)).collect();
            if !split.is_empty() {
                separating.push(l);
                for s in split {
                    open.remove(&s);
                }
            }
        }
        Ok((coincident, separating))
    }

    /// Sums obtained by replacing newform reductions with conjugate
    /// reductions of the same form that keep the determinant and HT checks
    /// valid on L; the Galois multiplicity of the sum is the orbit size.
    pub fn galois_orbit(&self, cs: &[Constituent]) -> Result<Vec<Vec<Constituent>>, FinderError> {
        let mates: Vec<Vec<Constituent>> = cs
            .iter()
            .map(|c| {
                let key = self.db.galois_key(c);
                match c.base {
                    Base::Newform(_) | Base::Sym2(_) => (0..self.db.reductions().len())
                        .map(|j| Constituent { base: if matches!(c.base, Base::Newform(_)) { Base::Newform(j) } else { Base::Sym2(j) }, ..*c })
                        .filter(|m| self.db.galois_key(m) == key)
                        .collect(),
                    _ => vec![*c],
                }
            })
            .collect();
        let mut out = Vec::new();
        for combo in mates.iter().multi_cartesian_product() {
            let mut v: Vec<Constituent> = combo.into_iter().copied().collect();
            v.sort();
            if self.ht_ok(&v) && self.det_ok(&v, &self.primes)? {
                out.push(v);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Eigenpacket of a sum: full at the primes flagged true, T(l, 1) only
    /// at the others, with a(l, 0) = 1.
    pub fn synthesize(&self, cs: &[Constituent], modes: &[(u64, bool)]) -> Result<Eigenpacket<ExtField>, FinderError> {
        let f = self.db.field();
        let mut packet = Eigenpacket::new(4);
        for &(l, full) in modes {
            if self.db.level().is_multiple_of(l) || l == f.p() as u64 {
                return Err(FinderError::BadPrime(l));
            }
            let mut c = self.sum_poly(cs, l)?;
            c.resize(5, f.zero());
            packet.values.insert((l, 0), f.one());
            let ks = if full { 1..=4 } else { 1..=1 };
            for k in ks {
                let w = f.pow(&f.from_i64(l as i64), (k * (k - 1) / 2) as u64);
                let a = f.div(&c[k], &w).unwrap();
                packet.values.insert((l, k), if k % 2 == 1 { f.neg(&a) } else { a });
            }
        }
        Ok(packet)
    }
}

/// The polynomial system of an eigenpacket: full where every a(l, k) is
/// known, partial where only a(l, 1) is.
pub fn system_of_eigenspace(f: &ExtField, packet: &Eigenpacket<ExtField>) -> Result<PolySystem<ExtField>, SystemError> {
    let mut s = PolySystem::new(f.clone(), packet.n);
    for l in packet.primes() {
        match hecke_polynomial(f, packet, l) {
            Some(LocalPoly::Full(c)) => s.insert_full(l, c)?,
            Some(LocalPoly::Partial(c)) => s.insert_partial(l, c),
            None => {}
        }
    }
    Ok(s)
}

/// Shape of a sum of constituents.
pub fn classify_pattern(db: &Database, cs: &[Constituent]) -> Pattern {
    let pure = |c: &Constituent| c.base == Base::One && db.characters()[c.chi].is_trivial();
    let chars: Vec<&Constituent> = cs.iter().filter(|c| db.degree(c) == 1).collect();
    let big: Vec<&Constituent> = cs.iter().filter(|c| db.degree(c) > 1).collect();
    match (chars.len(), big.as_slice()) {
        (4, []) => Pattern::FourChars,
        (1, [tau]) if db.degree(tau) == 3 => {
            let c = chars[0];
            if pure(c) && ((c.w == 0 && tau.w == 1) || (c.w == 3 && tau.w == 0)) {
                Pattern::Gl3
            } else {
                Pattern::Other
            }
        }
        (2, [sigma]) => {
            let Base::Newform(i) = sigma.base else { return Pattern::Other };
            let mut ws: Vec<u32> = chars.iter().map(|c| c.w).collect();
            ws.sort_unstable();
            match db.reductions()[i].weight {
                2 if chars.iter().all(|c| pure(c)) && ws[1] == ws[0] + 1 => Pattern::W2,
                3 => Pattern::W3,
                4 if chars.iter().all(|c| pure(c)) && ws == [1, 2] && sigma.w == 0 => Pattern::W4,
                _ => Pattern::Other,
            }
        }
        _ => Pattern::Other,
    }
}

/// Groups eigenspaces whose assignments differ only by Galois-conjugate
/// constituents; each group lists eigenspace indices in input order.
pub fn galois_multiplicity(db: &Database, assignments: &[Vec<Constituent>]) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<Vec<GaloisKey>, Vec<usize>> = BTreeMap::new();
    for (i, cs) in assignments.iter().enumerate() {
        let mut key: Vec<GaloisKey> = cs.iter().map(|c| db.galois_key(c)).collect();
        key.sort();
        groups.entry(key).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}
