use std::collections::BTreeMap;

use crate::ffield::{Field, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("a partial polynomial cannot be used as a divisor (at {0})")]
    PartialDivisor(u64),
    #[error("quotient degree would drop below zero ({divisor} > {dividend})")]
    DegreeUnderflow { dividend: usize, divisor: usize },
    #[error("no polynomial at {0}")]
    MissingPrime(u64),
    #[error("polynomial at {0} does not divide")]
    NotDivisible(u64),
    #[error("polynomial at {ell} has constant term != 1 or degree != {degree}")]
    BadPolynomial { ell: u64, degree: usize },
}

/// The polynomial of a system at one prime: a full polynomial (low
/// coefficient first, constant term 1) or 1 + c X known only mod X^2,
/// stored as c.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LocalPoly<E> {
    Full(Vec<E>),
    Partial(E),
}

impl<E: Clone> LocalPoly<E> {
    pub fn is_full(&self) -> bool {
        matches!(self, LocalPoly::Full(_))
    }

    /// The coefficient of X.
    pub fn linear(&self, f: &impl Field<Elem = E>) -> E {
        match self {
            LocalPoly::Full(c) => c.get(1).cloned().unwrap_or_else(|| f.zero()),
            LocalPoly::Partial(c) => c.clone(),
        }
    }
}

/// ell -> local polynomial, together with the declared degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem<F: Field> {
    field: F,
    degree: usize,
    entries: BTreeMap<u64, LocalPoly<F::Elem>>,
}

impl<F: Field> PolySystem<F> {
    pub fn new(field: F, degree: usize) -> Self {
        PolySystem { field, degree, entries: BTreeMap::new() }
    }

    /// The unit system of degree 0 on the given primes.
    pub fn one(field: F, primes: &[u64]) -> Self {
        let mut s = Self::new(field.clone(), 0);
        for &ell in primes {
            s.entries.insert(ell, LocalPoly::Full(vec![field.one()]));
        }
        s
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn primes(&self) -> Vec<u64> {
        self.entries.keys().copied().collect()
    }

    pub fn get(&self, ell: u64) -> Option<&LocalPoly<F::Elem>> {
        self.entries.get(&ell)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, &LocalPoly<F::Elem>)> {
        self.entries.iter().map(|(l, p)| (*l, p))
    }

    pub fn is_full(&self) -> bool {
        self.entries.values().all(LocalPoly::is_full)
    }

    /// Inserts a full polynomial, trimming trailing zeros and checking the
    /// constant term and degree bound.
    pub fn insert_full(&mut self, ell: u64, coeffs: Vec<F::Elem>) -> Result<(), SystemError> {
        let c = PolyRing::new(&self.field).normalize(coeffs);
        if c.is_empty() || !self.field.is_one(&c[0]) || c.len() > self.degree + 1 {
            return Err(SystemError::BadPolynomial { ell, degree: self.degree });
        }
        self.entries.insert(ell, LocalPoly::Full(c));
        Ok(())
    }

    pub fn insert_partial(&mut self, ell: u64, linear: F::Elem) {
        self.entries.insert(ell, LocalPoly::Partial(linear));
    }

    /// Keeps only the given primes.
    pub fn restrict(&self, primes: &[u64]) -> Self {
        let entries = self.entries.iter().filter(|(l, _)| primes.contains(l)).map(|(l, p)| (*l, p.clone())).collect();
        PolySystem { field: self.field.clone(), degree: self.degree, entries }
    }

    /// Drops partial entries.
    pub fn full_part(&self) -> Self {
        let entries = self.entries.iter().filter(|(_, p)| p.is_full()).map(|(l, p)| (*l, p.clone())).collect();
        PolySystem { field: self.field.clone(), degree: self.degree, entries }
    }

    /// Entrywise product over the primes of `self`; a partial factor makes
    /// the entry partial.
    pub fn mul(&self, other: &Self) -> Result<Self, SystemError> {
        let f = &self.field;
        let ring = PolyRing::new(f);
        let mut out = Self::new(f.clone(), self.degree + other.degree);
        for (&ell, a) in &self.entries {
            let b = other.entries.get(&ell).ok_or(SystemError::MissingPrime(ell))?;
            let entry = match (a, b) {
                (LocalPoly::Full(x), LocalPoly::Full(y)) => LocalPoly::Full(ring.mul(x, y)),
                _ => LocalPoly::Partial(f.add(&a.linear(f), &b.linear(f))),
            };
            out.entries.insert(ell, entry);
        }
        Ok(out)
    }

    pub fn product<'a>(field: F, primes: &[u64], systems: impl IntoIterator<Item = &'a Self>) -> Result<Self, SystemError>
    where
        F: 'a,
    {
        systems.into_iter().try_fold(Self::one(field, primes), |acc, s| acc.mul(s))
    }

    /// self / divisor; the divisor must be full at every prime of self.
    pub fn quotient(&self, divisor: &Self) -> Result<Self, SystemError> {
        if divisor.degree > self.degree {
            return Err(SystemError::DegreeUnderflow { dividend: self.degree, divisor: divisor.degree });
        }
        let f = &self.field;
        let ring = PolyRing::new(f);
        let mut out = Self::new(f.clone(), self.degree - divisor.degree);
        for (&ell, a) in &self.entries {
            let LocalPoly::Full(d) = divisor.entries.get(&ell).ok_or(SystemError::MissingPrime(ell))? else {
                return Err(SystemError::PartialDivisor(ell));
            };
            let entry = match a {
                LocalPoly::Full(x) => {
                    let (q, r) = ring.divrem(x, d);
                    if !r.is_empty() {
                        return Err(SystemError::NotDivisible(ell));
                    }
                    LocalPoly::Full(q)
                }
                // (1 + aX)(1 + dX)^{-1} = 1 + (a - d) X mod X^2
                LocalPoly::Partial(x) => {
                    let lin = d.get(1).cloned().unwrap_or_else(|| f.zero());
                    LocalPoly::Partial(f.sub(x, &lin))
                }
            };
            out.entries.insert(ell, entry);
        }
        Ok(out)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.quotient(self).is_ok()
    }

    /// Equality at the primes of `self` (partial entries compared mod X^2).
    pub fn agrees_with(&self, other: &Self) -> bool {
        let f = &self.field;
        self.entries.iter().all(|(ell, a)| match (a, other.entries.get(ell)) {
            (LocalPoly::Full(x), Some(LocalPoly::Full(y))) => x == y,
            (_, Some(b)) => a.linear(f) == b.linear(f),
            (_, None) => false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{Fp, PrimeField};

    fn field() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn e(n: i64) -> Fp {
        field().elem(n)
    }

    #[test]
    fn division_examples() {
        let f = field();
        let mut a = PolySystem::new(f.clone(), 2);
        a.insert_full(3, vec![e(1), e(-3), e(2)]).unwrap();
        let mut b = PolySystem::new(f.clone(), 1);
        b.insert_full(3, vec![e(1), e(-1)]).unwrap();
        let q = a.quotient(&b).unwrap();
        assert_eq!(q.get(3), Some(&LocalPoly::Full(vec![e(1), e(-2)])));

        let mut p = PolySystem::new(f.clone(), 4);
        p.insert_partial(11, e(-5));
        let mut d = PolySystem::new(f.clone(), 2);
        d.insert_full(11, vec![e(1), e(-2), e(7)]).unwrap();
        assert_eq!(p.quotient(&d).unwrap().get(11), Some(&LocalPoly::Partial(e(-3))));
        assert_eq!(d.quotient(&p), Err(SystemError::DegreeUnderflow { dividend: 2, divisor: 4 }));
    }

    #[test]
    fn degree_bookkeeping_refuses_underflow() {
        let f = field();
        let mut one = PolySystem::new(f.clone(), 1);
        one.insert_full(2, vec![e(1), e(-1)]).unwrap();
        let four = PolySystem::product(f.clone(), &[2], [&one, &one, &one, &one]).unwrap();
        let mut q = four.clone();
        for _ in 0..3 {
            q = q.quotient(&one).unwrap();
        }
        assert_eq!(q.degree(), 1);
        let z = q.quotient(&one).unwrap();
        assert_eq!(z.degree(), 0);
        assert!(matches!(z.quotient(&one), Err(SystemError::DegreeUnderflow { .. })));
    }
}
