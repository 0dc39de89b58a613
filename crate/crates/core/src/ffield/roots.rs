use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::ext::{ExtField, Fq};
use super::poly::PolyRing;
use super::prime::{Fp, PrimeField};
use super::{Field, FieldError};

/// Degrees of the irreducible factors of a squarefree polynomial over F_p,
/// sorted ascending.
pub fn factor_degrees(field: &PrimeField, poly: &[Fp]) -> Result<Vec<usize>, FieldError> {
    let ring = PolyRing::new(field);
    let f = ring.normalize(poly.to_vec());
    if !ring.is_squarefree(&f) {
        return Err(FieldError::NotSquarefree(field.p() as u64));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut d: Vec<usize> = ring
        .factor_squarefree(&ring.monic(&f), &mut rng)
        .iter()
        .map(|g| g.len() - 1)
        .collect();
    d.sort_unstable();
    Ok(d)
}

/// Smallest r such that a squarefree polynomial splits completely over F_{p^r}.
pub fn min_extension_degree(field: &PrimeField, poly: &[Fp]) -> Result<usize, FieldError> {
    Ok(factor_degrees(field, poly)?.into_iter().fold(1, |a, d| a.lcm(&d)))
}

/// All distinct roots in F_q of a nonzero polynomial over F_p, sorted.
///
/// Irreducible factors whose degree does not divide [F_q : F_p] contribute
/// nothing.
pub fn roots_of_fp_poly(field: &ExtField, poly: &[Fp]) -> Vec<Fq> {
    let base = field.prime_field();
    let ring = PolyRing::new(base);
    let f = ring.monic(&ring.normalize(poly.to_vec()));
    if f.len() <= 1 {
        return Vec::new();
    }
    let d = ring.derivative(&f);
    let sf = if d.is_empty() { f.clone() } else { ring.divrem(&f, &ring.gcd(&f, &d)).0 };
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut out = Vec::new();
    for g in ring.factor_squarefree(&sf, &mut rng) {
        let e = g.len() - 1;
        if !field.r().is_multiple_of(e) {
            continue;
        }
        out.extend(roots_of_irreducible(field, &g, &mut rng));
    }
    out.sort();
    out
}

fn roots_of_irreducible(field: &ExtField, g: &[Fp], rng: &mut ChaCha8Rng) -> Vec<Fq> {
    let e = g.len() - 1;
    if e == 1 {
        let base = field.prime_field();
        return vec![field.embed(base.negp(g[0]))];
    }
    let (t, m) = field.subfield_generator(e).expect("degree divides r");
    let p = field.p() as u64;
    let sub = ExtField::with_modulus(p, &m.iter().map(|c| c.0 as u64).collect::<Vec<_>>())
        .expect("minimal polynomial is irreducible");
    let sring = PolyRing::new(&sub);
    let gk: Vec<Fq> = g.iter().map(|c| sub.embed(*c)).collect();
    let tpow: Vec<Fq> = std::iter::successors(Some(field.one()), |x| Some(field.mul(x, &t)))
        .take(e)
        .collect();
    sring
        .roots(&gk, rng)
        .into_iter()
        .map(|y| {
            y.0.iter().zip(&tpow).fold(field.zero(), |acc, (&c, tp)| {
                field.add(&acc, &field.mul(&field.embed(Fp(c)), tp))
            })
        })
        .collect()
}

/// The roots in F_q of a polynomial over F_p that is required to be
/// squarefree and to split completely in F_q.
pub fn embed_residue_field(field: &ExtField, poly: &[Fp]) -> Result<Vec<Fq>, FieldError> {
    let base = field.prime_field();
    for e in factor_degrees(base, poly)? {
        if !field.r().is_multiple_of(e) {
            return Err(FieldError::NoEmbedding { factor: e, field: field.r() });
        }
    }
    Ok(roots_of_fp_poly(field, poly))
}
