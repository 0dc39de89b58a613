use num_bigint::BigUint;
use rand::RngCore;

use super::Field;

/// Dense univariate polynomials over a field, coefficients low degree first.
///
/// Polynomials are plain `Vec<F::Elem>` kept normalized (no trailing zeros);
/// the zero polynomial is the empty vector.
#[derive(Clone, Copy, Debug)]
pub struct PolyRing<'a, F: Field> {
    pub field: &'a F,
}

impl<'a, F: Field> PolyRing<'a, F> {
    pub fn new(field: &'a F) -> Self {
        PolyRing { field }
    }

    pub fn normalize(&self, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
        while a.last().is_some_and(|c| self.field.is_zero(c)) {
            a.pop();
        }
        a
    }

    /// Degree, with the zero polynomial given degree `None`.
    pub fn deg(&self, a: &[F::Elem]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn x(&self) -> Vec<F::Elem> {
        vec![self.field.zero(), self.field.one()]
    }

    pub fn constant(&self, c: F::Elem) -> Vec<F::Elem> {
        self.normalize(vec![c])
    }

    pub fn add(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field;
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => f.add(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        self.normalize(out)
    }

    pub fn neg(&self, a: &[F::Elem]) -> Vec<F::Elem> {
        a.iter().map(|c| self.field.neg(c)).collect()
    }

    pub fn sub(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
        self.normalize(a.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let f = self.field;
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        self.normalize(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let f = self.field;
        let db = b.len().checked_sub(1).expect("division by the zero polynomial");
        let lead_inv = f.inv(&b[db]).expect("normalized divisor");
        let mut r = a.to_vec();
        if r.len() <= db {
            return (Vec::new(), self.normalize(r));
        }
        let mut q = vec![f.zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let c = f.mul(&r[i], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let t = f.mul(&c, bj);
                r[i - db + j] = f.sub(&r[i - db + j], &t);
            }
            q[i - db] = c;
        }
        r.truncate(db);
        (self.normalize(q), self.normalize(r))
    }

    pub fn rem(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        self.divrem(a, b).1
    }

    pub fn monic(&self, a: &[F::Elem]) -> Vec<F::Elem> {
        match a.last() {
            None => Vec::new(),
            Some(l) => {
                let li = self.field.inv(l).expect("nonzero leading coefficient");
                self.scale(a, &li)
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let (mut x, mut y) = (self.normalize(a.to_vec()), self.normalize(b.to_vec()));
        while !y.is_empty() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Returns (g, s) with g = gcd(a, m) monic and s*a = g mod m.
    pub fn gcd_inverse(&self, a: &[F::Elem], m: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let (mut r0, mut r1) = (self.normalize(m.to_vec()), self.rem(a, m));
        let (mut s0, mut s1): (Vec<F::Elem>, Vec<F::Elem>) = (Vec::new(), vec![self.field.one()]);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        match r0.last() {
            None => (Vec::new(), Vec::new()),
            Some(l) => {
                let li = self.field.inv(l).unwrap();
                (self.scale(&r0, &li), self.rem(&self.scale(&s0, &li), m))
            }
        }
    }

    pub fn mulmod(&self, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Vec<F::Elem> {
        let base = self.rem(a, m);
        let mut acc = self.rem(&[self.field.one()], m);
        for i in (0..e.bits()).rev() {
            acc = self.mulmod(&acc, &acc, m);
            if e.bit(i) {
                acc = self.mulmod(&acc, &base, m);
            }
        }
        acc
    }

    pub fn eval(&self, a: &[F::Elem], x: &F::Elem) -> F::Elem {
        let f = self.field;
        a.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn derivative(&self, a: &[F::Elem]) -> Vec<F::Elem> {
        let f = self.field;
        let d = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        self.normalize(d)
    }

    pub fn is_squarefree(&self, a: &[F::Elem]) -> bool {
        self.gcd(a, &self.derivative(a)).len() <= 1
    }

    /// Product of (1 - r X) style factors is common enough to deserve a helper:
    /// the monic polynomial with the given roots.
    pub fn from_roots(&self, roots: &[F::Elem]) -> Vec<F::Elem> {
        roots.iter().fold(vec![self.field.one()], |acc, r| {
            self.mul(&acc, &[self.field.neg(r), self.field.one()])
        })
    }

    pub(crate) fn random_poly(&self, deg: usize, rng: &mut dyn RngCore) -> Vec<F::Elem> {
        self.normalize((0..deg).map(|_| self.field.random(rng)).collect())
    }

    /// All roots in the field of a nonzero polynomial, sorted and without
    /// multiplicity (Cantor-Zassenhaus).
    pub fn roots(&self, a: &[F::Elem], rng: &mut dyn RngCore) -> Vec<F::Elem> {
        let a = self.monic(&self.normalize(a.to_vec()));
        if a.len() <= 1 {
            return Vec::new();
        }
        let q = self.field.order();
        let xq = self.powmod(&self.x(), &q, &a);
        let split = self.gcd(&a, &self.sub(&xq, &self.x()));
        let mut out = Vec::new();
        self.split_linear(split, &q, rng, &mut out);
        out.sort();
        out
    }

    fn split_linear(&self, g: Vec<F::Elem>, q: &BigUint, rng: &mut dyn RngCore, out: &mut Vec<F::Elem>) {
        let f = self.field;
        match g.len() {
            0 | 1 => {}
            2 => out.push(f.neg(&f.div(&g[0], &g[1]).unwrap())),
            _ => {
                if self.field.characteristic() == 2 {
                    unreachable!("characteristic 2 is not supported");
                }
                let half: BigUint = (q - 1u32) >> 1;
                loop {
                    let t = vec![f.random(rng), f.one()];
                    let w = self.powmod(&t, &half, &g);
                    let d = self.gcd(&g, &self.sub(&w, &[f.one()]));
                    if d.len() > 1 && d.len() < g.len() {
                        let other = self.divrem(&g, &d).0;
                        self.split_linear(d, q, rng, out);
                        self.split_linear(other, q, rng, out);
                        return;
                    }
                }
            }
        }
    }

    /// Factorization of a squarefree monic polynomial into monic irreducibles,
    /// sorted by degree then coefficients. Intended for small base fields.
    pub fn factor_squarefree(&self, a: &[F::Elem], rng: &mut dyn RngCore) -> Vec<Vec<F::Elem>> {
        let mut rest = self.monic(a);
        let q = self.field.order();
        let mut h = self.x();
        let mut out = Vec::new();
        let mut d = 0;
        while rest.len() > 1 {
            d += 1;
            if 2 * d > rest.len() - 1 {
                out.push(rest.clone());
                break;
            }
            h = self.powmod(&h, &q, &rest);
            let g = self.gcd(&rest, &self.sub(&h, &self.x()));
            if g.len() > 1 {
                rest = self.divrem(&rest, &g).0;
                h = self.rem(&h, &rest);
                self.equal_degree(g, d, &q, rng, &mut out);
            }
        }
        out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        out
    }

    fn equal_degree(&self, g: Vec<F::Elem>, d: usize, q: &BigUint, rng: &mut dyn RngCore, out: &mut Vec<Vec<F::Elem>>) {
        let n = g.len() - 1;
        if n == d {
            out.push(g);
            return;
        }
        let e: BigUint = (q.pow(d as u32) - 1u32) >> 1;
        loop {
            let t = self.random_poly(n, rng);
            if t.len() <= 1 {
                continue;
            }
            let w = self.powmod(&t, &e, &g);
            let c = self.gcd(&g, &self.sub(&w, &[self.field.one()]));
            if c.len() > 1 && c.len() < g.len() {
                let other = self.divrem(&g, &c).0;
                self.equal_degree(c, d, q, rng, out);
                self.equal_degree(other, d, q, rng, out);
                return;
            }
        }
    }
}
