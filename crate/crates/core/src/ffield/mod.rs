//! Finite fields F_p and F_{p^r}, polynomials over them, root finding and
//! admissible-prime selection.

mod admissible;
mod ext;
mod poly;
mod prime;
mod roots;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use rand::RngCore;

pub use admissible::{is_admissible_prime, is_prime, next_admissible_prime, unit_group_exponent};
pub use ext::{ExtField, Fq};
pub use poly::PolyRing;
pub use prime::{Fp, PrimeField};
pub use roots::{embed_residue_field, factor_degrees, min_extension_degree, roots_of_fp_poly};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not supported (need 5 < p < 2^31)")]
    UnsupportedCharacteristic(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus of degree {0} is not monic irreducible")]
    BadModulus(usize),
    #[error("polynomial is not squarefree modulo {0}")]
    NotSquarefree(u64),
    #[error("irreducible factor of degree {factor} does not embed in a degree-{field} extension")]
    NoEmbedding { factor: usize, field: usize },
}

/// Arithmetic in a finite field whose elements carry no context.
///
/// Elements are plain values; every operation goes through the field so that
/// runtime moduli are possible.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// The absolute Frobenius a -> a^p.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;
    /// Coefficients over F_p in the power basis, length `degree()`.
    fn to_coeffs(&self, a: &Self::Elem) -> Vec<u64>;
    fn from_coeffs(&self, c: &[u64]) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.degree() as u32)
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Image of an element of the prime field F_p.
    fn from_prime(&self, a: Fp) -> Self::Elem {
        self.from_i64(a.0 as i64)
    }

    /// a times an element of the prime field.
    fn scale_prime(&self, a: &Self::Elem, s: Fp) -> Self::Elem {
        self.mul(a, &self.from_prime(s))
    }

    /// Defining polynomial over F_p, monic and low degree first.
    fn modulus_coeffs(&self) -> Vec<u64> {
        vec![0, 1]
    }

    /// The element as an F_p value, if it lies in the prime field.
    fn to_prime(&self, a: &Self::Elem) -> Option<Fp> {
        let c = self.to_coeffs(a);
        if c.iter().skip(1).all(|&x| x == 0) {
            Some(Fp(c[0] as u32))
        } else {
            None
        }
    }
}
