use crate::lattice::IMat;

/// Gaussian binomial coefficient [n choose k]_q.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= (q as u128).pow((n - i) as u32) - 1;
        den *= (q as u128).pow((i + 1) as u32) - 1;
    }
    (num / den) as u64
}

/// Representatives g of the single cosets SL(n, Z) g in the double coset
/// of D(ell, k) = diag(1, ..., 1, ell, ..., ell) (k entries ell).
///
/// Each is upper triangular in Hermite normal form: diagonal entries 1 or
/// ell with k of them ell, and entry (i, j) ranging over 0..ell exactly when
/// d_i = 1 and d_j = ell, zero otherwise.
pub fn single_coset_reps(n: usize, ell: u64, k: usize) -> Vec<IMat> {
    assert!(k <= n && n <= crate::lattice::MAX_RANK);
    let ell = ell as i64;
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let d: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { ell } else { 1 }).collect();
        let free: Vec<(usize, usize)> =
            (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).filter(|&(i, j)| d[i] == 1 && d[j] == ell).collect();
        let total = (ell as u64).pow(free.len() as u32);
        for mut code in 0..total {
            let mut g = IMat::diag(&d);
            for &(i, j) in &free {
                g.set(i, j, (code % ell as u64) as i64);
                code /= ell as u64;
            }
            out.push(g);
        }
    }
    out
}
