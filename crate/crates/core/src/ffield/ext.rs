use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::PolyRing;
use super::prime::{Fp, PrimeField};
use super::{Field, FieldError};

/// An element of F_{p^r}: coefficients of the reduced representative in the
/// power basis of the modulus, constant term first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub Vec<u32>);

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq{:?}", self.0)
    }
}

#[derive(Clone)]
pub struct ExtField {
    base: PrimeField,
    r: usize,
    /// Monic modulus, low degree first, length r + 1.
    modulus: Vec<u32>,
    /// Nonzero lower terms (j, -m_j) so that x^r = sum (-m_j) x^j.
    reduction: Vec<(usize, u64)>,
    /// frob[i] = x^(i p) mod modulus.
    frob: Arc<Vec<Vec<u32>>>,
    subfields: Arc<Mutex<HashMap<usize, (Fq, Vec<Fp>)>>>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.base.p(), self.r)
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.modulus == other.modulus
    }
}

impl Eq for ExtField {}

/// Ben-Or irreducibility test for a monic polynomial over F_p.
pub(crate) fn is_irreducible_fp(field: &PrimeField, f: &[Fp]) -> bool {
    let ring = PolyRing::new(field);
    let r = f.len() - 1;
    if r == 1 {
        return true;
    }
    if f[0].0 == 0 {
        return false;
    }
    let xp = ring.powmod(&ring.x(), &(field.p() as u64).into(), f);
    let table = power_table(field, &xp, f);
    let mut h = xp.clone();
    for i in 1..=r / 2 {
        if i > 1 {
            h = apply_table(field, &table, &h);
        }
        if ring.gcd(f, &ring.sub(&h, &ring.x())).len() > 1 {
            return false;
        }
    }
    true
}

/// Rows t[j] = xp^j mod f for j < deg f, padded to deg f.
fn power_table(field: &PrimeField, xp: &[Fp], f: &[Fp]) -> Vec<Vec<Fp>> {
    let ring = PolyRing::new(field);
    let r = f.len() - 1;
    let mut table = Vec::with_capacity(r);
    let mut cur = vec![Fp(1)];
    for _ in 0..r {
        let mut row = cur.clone();
        row.resize(r, Fp(0));
        table.push(row);
        cur = ring.mulmod(&cur, xp, f);
    }
    table
}

fn apply_table(field: &PrimeField, table: &[Vec<Fp>], h: &[Fp]) -> Vec<Fp> {
    let r = table.len();
    let p = field.p() as u64;
    let mut acc = vec![0u64; r];
    for (j, c) in h.iter().enumerate() {
        if c.0 == 0 {
            continue;
        }
        for (a, t) in acc.iter_mut().zip(&table[j]) {
            *a = (*a + c.0 as u64 * t.0 as u64) % p;
        }
    }
    PolyRing::new(field).normalize(acc.into_iter().map(|v| Fp(v as u32)).collect())
}

impl ExtField {
    /// F_{p^r} with the canonical modulus: the lexicographically smallest
    /// monic irreducible polynomial of degree r, comparing the coefficient
    /// vectors (c_0, ..., c_{r-1}) with c_0 most significant.
    pub fn new(p: u64, r: usize) -> Result<Self, FieldError> {
        let base = PrimeField::new(p)?;
        if r == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let modulus = canonical_modulus(&base, r);
        Self::build(base, modulus)
    }

    /// F_p[x]/(modulus) for an explicit monic irreducible modulus (low first).
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Self, FieldError> {
        let base = PrimeField::new(p)?;
        let m: Vec<Fp> = modulus.iter().map(|&c| base.elem(c as i64)).collect();
        let r = m.len().saturating_sub(1);
        if r == 0 || m[r] != Fp(1) || !is_irreducible_fp(&base, &m) {
            return Err(FieldError::BadModulus(r));
        }
        Self::build(base, m)
    }

    fn build(base: PrimeField, modulus: Vec<Fp>) -> Result<Self, FieldError> {
        let r = modulus.len() - 1;
        let p = base.p() as u64;
        let reduction = (0..r)
            .filter(|&j| modulus[j].0 != 0)
            .map(|j| (j, (p - modulus[j].0 as u64) % p))
            .collect();
        let ring = PolyRing::new(&base);
        let xp = ring.powmod(&ring.x(), &p.into(), &modulus);
        let frob = power_table(&base, &xp, &modulus)
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.0).collect())
            .collect();
        Ok(ExtField {
            base,
            r,
            modulus: modulus.into_iter().map(|c| c.0).collect(),
            reduction,
            frob: Arc::new(frob),
            subfields: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    /// Schoolbook product reducing mod p only once per coefficient; valid
    /// while 4r (p-1)^2 fits in a u64.
    fn mul_lazy(&self, a: &Fq, b: &Fq) -> Fq {
        let r = self.r;
        let p = self.base.p() as u64;
        let mut t = vec![0u64; 2 * r - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u64;
            for (tj, &y) in t[i..i + r].iter_mut().zip(&b.0) {
                *tj += x * y as u64;
            }
        }
        for i in (r..2 * r - 1).rev() {
            let c = t[i] % p;
            if c == 0 {
                continue;
            }
            for &(j, m) in &self.reduction {
                t[i - r + j] += c * m;
            }
        }
        Fq(t[..r].iter().map(|&v| (v % p) as u32).collect())
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn prime_field(&self) -> &PrimeField {
        &self.base
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The class of x, a generator of F_{p^r} over F_p.
    pub fn generator(&self) -> Fq {
        let mut c = vec![0u32; self.r];
        if self.r == 1 {
            c[0] = (self.base.p() - self.modulus[0]) % self.base.p() ;
        } else {
            c[1] = 1;
        }
        Fq(c)
    }

    pub fn embed(&self, a: Fp) -> Fq {
        let mut c = vec![0u32; self.r];
        c[0] = a.0;
        Fq(c)
    }

    /// Evaluates an F_p polynomial (low first) at an element.
    pub fn eval_fp_poly(&self, poly: &[Fp], x: &Fq) -> Fq {
        poly.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), &self.embed(*c)))
    }

    /// A generator t of the unique subfield of degree e together with its
    /// minimal polynomial over F_p (monic, low first). Cached per e.
    pub fn subfield_generator(&self, e: usize) -> Result<(Fq, Vec<Fp>), FieldError> {
        if e == 0 || !self.r.is_multiple_of(e) {
            return Err(FieldError::NoEmbedding { factor: e, field: self.r });
        }
        if let Some(hit) = self.subfields.lock().unwrap().get(&e) {
            return Ok(hit.clone());
        }
        let found = if e == self.r {
            let m = self.modulus.iter().map(|&c| Fp(c)).collect();
            (self.generator(), m)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ e as u64);
            loop {
                let u = self.random(&mut rng);
                let t = self.relative_trace(&u, e);
                if let Some(m) = self.minimal_polynomial(&t) {
                    if m.len() == e + 1 {
                        break (t, m);
                    }
                }
            }
        };
        self.subfields.lock().unwrap().insert(e, found.clone());
        Ok(found)
    }

    fn relative_trace(&self, u: &Fq, e: usize) -> Fq {
        let mut acc = self.zero();
        let mut cur = u.clone();
        for _ in 0..self.r / e {
            acc = self.add(&acc, &cur);
            for _ in 0..e {
                cur = self.frobenius(&cur);
            }
        }
        acc
    }

    /// Minimal polynomial over F_p (monic, low first) via linear dependence of
    /// powers.
    pub fn minimal_polynomial(&self, t: &Fq) -> Option<Vec<Fp>> {
        let f = &self.base;
        let r = self.r;
        // Reduced echelon rows with their combination of powers.
        let mut basis: Vec<(usize, Vec<Fp>, Vec<Fp>)> = Vec::new();
        let mut power = self.one();
        for d in 0..=r {
            let mut v: Vec<Fp> = power.0.iter().map(|&c| Fp(c)).collect();
            let mut comb = vec![Fp(0); r + 1];
            comb[d] = Fp(1);
            for (piv, row, rc) in &basis {
                let c = v[*piv];
                if c.0 != 0 {
                    for k in 0..r {
                        v[k] = f.subp(v[k], f.mulp(c, row[k]));
                    }
                    for k in 0..=r {
                        comb[k] = f.subp(comb[k], f.mulp(c, rc[k]));
                    }
                }
            }
            match v.iter().position(|c| c.0 != 0) {
                None => {
                    comb.truncate(d + 1);
                    return Some(comb);
                }
                Some(piv) => {
                    let inv = f.invp(v[piv]).unwrap();
                    for c in v.iter_mut() {
                        *c = f.mulp(*c, inv);
                    }
                    for c in comb.iter_mut() {
                        *c = f.mulp(*c, inv);
                    }
                    basis.push((piv, v, comb));
                }
            }
            power = self.mul(&power, t);
        }
        None
    }
}

fn canonical_modulus(base: &PrimeField, r: usize) -> Vec<Fp> {
    let p = base.p();
    if r == 1 {
        return vec![Fp(0), Fp(1)];
    }
    // Counter over (c_0, ..., c_{r-1}) with c_{r-1} least significant.
    let mut c = vec![0u32; r];
    c[0] = 1;
    loop {
        let mut f: Vec<Fp> = c.iter().map(|&v| Fp(v)).collect();
        f.push(Fp(1));
        if is_irreducible_fp(base, &f) {
            return f;
        }
        let mut i = r - 1;
        loop {
            c[i] += 1;
            if c[i] < p {
                break;
            }
            c[i] = 0;
            i -= 1;
        }
    }
}

impl Field for ExtField {
    type Elem = Fq;

    fn characteristic(&self) -> u64 {
        self.base.p() as u64
    }
    fn degree(&self) -> usize {
        self.r
    }
    fn zero(&self) -> Fq {
        Fq(vec![0; self.r])
    }
    fn one(&self) -> Fq {
        let mut c = vec![0; self.r];
        c[0] = 1;
        Fq(c)
    }
    fn from_i64(&self, n: i64) -> Fq {
        self.embed(self.base.elem(n))
    }
    fn add(&self, a: &Fq, b: &Fq) -> Fq {
        let p = self.base.p();
        Fq(a.0.iter().zip(&b.0).map(|(&x, &y)| {
            let s = x + y;
            if s >= p { s - p } else { s }
        }).collect())
    }
    fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        let p = self.base.p();
        Fq(a.0.iter().zip(&b.0).map(|(&x, &y)| if x >= y { x - y } else { x + p - y }).collect())
    }
    fn neg(&self, a: &Fq) -> Fq {
        let p = self.base.p();
        Fq(a.0.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
    }
    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        let r = self.r;
        let p = self.base.p() as u64;
        if r == 1 {
            return Fq(vec![((a.0[0] as u64 * b.0[0] as u64) % p) as u32]);
        }
        let sq = (p - 1) * (p - 1);
        if sq > 0 && u64::MAX / sq > 4 * r as u64 {
            return self.mul_lazy(a, b);
        }
        let mut t = vec![0u64; 2 * r - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u64;
            for (j, &y) in b.0.iter().enumerate() {
                t[i + j] = (t[i + j] + x * y as u64) % p;
            }
        }
        for i in (r..2 * r - 1).rev() {
            let c = t[i];
            if c == 0 {
                continue;
            }
            for &(j, m) in &self.reduction {
                let k = i - r + j;
                t[k] = (t[k] + c * m) % p;
            }
        }
        t.truncate(r);
        Fq(t.into_iter().map(|v| v as u32).collect())
    }
    fn inv(&self, a: &Fq) -> Option<Fq> {
        if self.is_zero(a) {
            return None;
        }
        let ring = PolyRing::new(&self.base);
        let av = ring.normalize(a.0.iter().map(|&c| Fp(c)).collect());
        let m: Vec<Fp> = self.modulus.iter().map(|&c| Fp(c)).collect();
        let (g, s) = ring.gcd_inverse(&av, &m);
        debug_assert_eq!(g, vec![Fp(1)]);
        let mut c: Vec<u32> = s.into_iter().map(|x| x.0).collect();
        c.resize(self.r, 0);
        Some(Fq(c))
    }
    fn is_zero(&self, a: &Fq) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    fn frobenius(&self, a: &Fq) -> Fq {
        if self.r == 1 {
            return a.clone();
        }
        let p = self.base.p() as u64;
        let mut acc = vec![0u64; self.r];
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (x, &t) in acc.iter_mut().zip(&self.frob[i]) {
                *x = (*x + c as u64 * t as u64) % p;
            }
        }
        Fq(acc.into_iter().map(|v| v as u32).collect())
    }
    fn random(&self, rng: &mut dyn RngCore) -> Fq {
        let p = self.base.p() as u64;
        Fq((0..self.r).map(|_| (rng.next_u64() % p) as u32).collect())
    }
    fn to_coeffs(&self, a: &Fq) -> Vec<u64> {
        a.0.iter().map(|&c| c as u64).collect()
    }
    fn from_coeffs(&self, c: &[u64]) -> Fq {
        let p = self.base.p() as u64;
        let mut v: Vec<u32> = c.iter().map(|&x| (x % p) as u32).collect();
        v.resize(self.r, 0);
        if c.len() > self.r {
            // reduce a longer representative
            let ring = PolyRing::new(&self.base);
            let a = ring.normalize(c.iter().map(|&x| Fp((x % p) as u32)).collect());
            let m: Vec<Fp> = self.modulus.iter().map(|&x| Fp(x)).collect();
            let mut rem: Vec<u32> = ring.rem(&a, &m).into_iter().map(|x| x.0).collect();
            rem.resize(self.r, 0);
            return Fq(rem);
        }
        Fq(v)
    }
    fn modulus_coeffs(&self) -> Vec<u64> {
        self.modulus.iter().map(|&c| c as u64).collect()
    }
    fn from_prime(&self, a: Fp) -> Fq {
        self.embed(a)
    }
    fn scale_prime(&self, a: &Fq, s: Fp) -> Fq {
        let p = self.base.p() as u64;
        Fq(a.0.iter().map(|&c| ((c as u64 * s.0 as u64) % p) as u32).collect())
    }
}
