use num_integer::Integer;

use super::FieldError;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Exponent of the unit group (Z/N)^x (the Carmichael function).
pub fn unit_group_exponent(n: u64) -> u64 {
    let mut m = n;
    let mut lambda = 1u64;
    for q in prime_factors(n) {
        let mut e = 0;
        while m.is_multiple_of(q) {
            m /= q;
            e += 1;
        }
        let part = if q == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1 << (e - 2),
            }
        } else {
            (q - 1) * q.pow(e - 1)
        };
        lambda = lambda.lcm(&part);
    }
    lambda
}

/// p is admissible for level N when p > 5, p does not divide N and the
/// exponent of (Z/N)^x divides p - 1, so that F_p holds every value of every
/// character mod N.
pub fn is_admissible_prime(p: u64, n: u64) -> Result<bool, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    Ok(p > 5 && !n.is_multiple_of(p) && (p - 1).is_multiple_of(unit_group_exponent(n)))
}

/// First admissible prime that is at least `floor`.
pub fn next_admissible_prime(n: u64, floor: u64) -> u64 {
    let mut p = floor.max(7);
    loop {
        if is_prime(p) && is_admissible_prime(p, n).unwrap_or(false) {
            return p;
        }
        p += 1;
    }
}
