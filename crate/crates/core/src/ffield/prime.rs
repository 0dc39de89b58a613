use std::fmt;

use rand::RngCore;

use super::admissible::is_prime;
use super::{Field, FieldError};

/// An element of F_p in canonical form `0 <= value < p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp(pub u32);

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p <= 5 || p >= 1 << 31 {
            return Err(FieldError::UnsupportedCharacteristic(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn elem(&self, n: i64) -> Fp {
        Fp(n.rem_euclid(self.p as i64) as u32)
    }

    /// Symmetric representative in (-p/2, p/2].
    pub fn signed(&self, a: Fp) -> i64 {
        let v = a.0 as i64;
        if v > self.p as i64 / 2 {
            v - self.p as i64
        } else {
            v
        }
    }

    #[inline]
    pub fn addp(&self, a: Fp, b: Fp) -> Fp {
        let s = a.0 as u64 + b.0 as u64;
        Fp(if s >= self.p as u64 { s - self.p as u64 } else { s } as u32)
    }

    #[inline]
    pub fn subp(&self, a: Fp, b: Fp) -> Fp {
        if a.0 >= b.0 {
            Fp(a.0 - b.0)
        } else {
            Fp(a.0 + self.p - b.0)
        }
    }

    #[inline]
    pub fn mulp(&self, a: Fp, b: Fp) -> Fp {
        Fp(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    #[inline]
    pub fn negp(&self, a: Fp) -> Fp {
        if a.0 == 0 {
            a
        } else {
            Fp(self.p - a.0)
        }
    }

    pub fn invp(&self, a: Fp) -> Option<Fp> {
        if a.0 == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(self.elem(t0))
    }

    pub fn powp(&self, a: Fp, mut e: u64) -> Fp {
        let mut base = a;
        let mut acc = Fp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulp(acc, base);
            }
            base = self.mulp(base, base);
            e >>= 1;
        }
        acc
    }

    /// Smallest primitive root modulo p.
    pub fn primitive_root(&self) -> Fp {
        let p = self.p as u64;
        let factors = super::admissible::prime_factors(p - 1);
        (2..p)
            .map(|g| Fp(g as u32))
            .find(|&g| factors.iter().all(|&q| self.powp(g, (p - 1) / q) != Fp(1)))
            .expect("a prime field has a primitive root")
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn degree(&self) -> usize {
        1
    }
    fn zero(&self) -> Fp {
        Fp(0)
    }
    fn one(&self) -> Fp {
        Fp(1)
    }
    fn from_i64(&self, n: i64) -> Fp {
        self.elem(n)
    }
    fn add(&self, a: &Fp, b: &Fp) -> Fp {
        self.addp(*a, *b)
    }
    fn sub(&self, a: &Fp, b: &Fp) -> Fp {
        self.subp(*a, *b)
    }
    fn neg(&self, a: &Fp) -> Fp {
        self.negp(*a)
    }
    fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        self.mulp(*a, *b)
    }
    fn inv(&self, a: &Fp) -> Option<Fp> {
        self.invp(*a)
    }
    fn is_zero(&self, a: &Fp) -> bool {
        a.0 == 0
    }
    fn frobenius(&self, a: &Fp) -> Fp {
        *a
    }
    fn random(&self, rng: &mut dyn RngCore) -> Fp {
        Fp((rng.next_u64() % self.p as u64) as u32)
    }
    fn to_coeffs(&self, a: &Fp) -> Vec<u64> {
        vec![a.0 as u64]
    }
    fn from_coeffs(&self, c: &[u64]) -> Fp {
        Fp((c.first().copied().unwrap_or(0) % self.p as u64) as u32)
    }
    fn from_prime(&self, a: Fp) -> Fp {
        a
    }
    fn to_prime(&self, a: &Fp) -> Option<Fp> {
        Some(*a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_and_composite() {
        assert!(matches!(PrimeField::new(5), Err(FieldError::UnsupportedCharacteristic(5))));
        assert!(matches!(PrimeField::new(4003 * 7), Err(FieldError::NotPrime(_))));
        assert!(PrimeField::new(4001).is_ok());
    }

    #[test]
    fn inverse_and_primitive_root() {
        let f = PrimeField::new(12037).unwrap();
        for a in [1i64, 2, 1293, 12036] {
            let x = f.elem(a);
            assert_eq!(f.mulp(x, f.invp(x).unwrap()), Fp(1));
        }
        assert_eq!(f.primitive_root(), Fp(5));
        assert_eq!(f.signed(f.elem(-1293)), -1293);
    }
}
