//! Acceptance suite: one pass/fail line per criterion.

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sl4coh::constituents::{ap_from_elliptic_curve, default_newform_dir, load_newforms, reduce, Base, Constituent, Database};
use sl4coh::dirichlet::CharacterGroup;
use sl4coh::ffield::{next_admissible_prime, ExtField, Field, Fp, PrimeField};
use sl4coh::finder::{
    ascii_representation, parse_representation, system_of_eigenspace, Finder, PolySystem, SystemError,
};
use sl4coh::hecke::{
    gaussian_binomial, hecke_matrix_via_oracle, simultaneous_eigenspaces, single_coset_reps, HeckeAlgebra, HeckeError,
    HeckeOperator, TrivialOracle,
};
use sl4coh::lattice::IVec;
use sl4coh::orbitcomplex::{build, E1Term, OrbitStructure};
use sl4coh::sharbly::SharblyChain;
use sl4coh::sparsela::DenseMatrix;
use sl4coh::voronoi::{enumerate_cell_classes, TruncatedVoronoiComplex};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cells() -> &'static TruncatedVoronoiComplex {
    static C: OnceLock<TruncatedVoronoiComplex> = OnceLock::new();
    C.get_or_init(|| enumerate_cell_classes(4).unwrap())
}

struct Built {
    level: u64,
    label: &'static str,
    structure: OrbitStructure,
    e1: E1Term,
}

fn build_case(level: u64, label: &'static str) -> Built {
    let g = CharacterGroup::new(level, next_admissible_prime(level, 1000)).unwrap();
    let eta = g.parse_label(label).unwrap();
    let (structure, e1) = build(cells(), &eta).unwrap();
    Built { level, label, structure, e1 }
}

/// The complexes behind the homology criteria, built once.
fn table_cases() -> &'static [Built] {
    static B: OnceLock<Vec<Built>> = OnceLock::new();
    B.get_or_init(|| [(11, "1"), (13, "1"), (13, "chi_13^2"), (17, "1"), (41, "1")].into_iter().map(|(n, l)| build_case(n, l)).collect())
}

fn criterion_1() -> Outcome {
    let b = table_cases().iter().find(|b| b.level == 41).unwrap();
    let (d1, d2) = (&b.e1.d1, &b.e1.d2);
    let sizes = format!("d2 {}x{}, d1 {}x{}", d2.nrows(), d2.ncols(), d1.nrows(), d1.ncols());
    check((d2.nrows(), d2.ncols(), d1.nrows(), d1.ncols()) == (24590, 7100, 7100, 746), &sizes)?;
    Ok(sizes)
}

fn criterion_2() -> Outcome {
    let expected = [2usize, 1, 2, 3, 9];
    let got: Vec<usize> = table_cases().iter().map(|b| b.e1.h1_dim()).collect();
    let desc: Vec<String> = table_cases().iter().zip(&got).map(|(b, h)| format!("N={} {}: {h}", b.level, b.label)).collect();
    check(got == expected, format!("{desc:?}"))?;
    Ok(desc.join(", "))
}

fn random_vec(rng: &mut ChaCha8Rng) -> IVec {
    let mut v = [0i64; 4];
    while v.iter().all(|&x| x == 0) {
        for x in v.iter_mut() {
            *x = rng.gen_range(-3..=3);
        }
    }
    v
}

fn criterion_3() -> Outcome {
    let mut built = 0;
    let mut verify = |e1: &E1Term, what: String| -> Result<(), String> {
        built += 1;
        let prod = e1.d2.mul(&e1.d1).map_err(|e| format!("{what}: {e}"))?;
        check(prod.is_zero(), format!("{what}: d1 d2 != 0"))
    };
    for b in table_cases() {
        verify(&b.e1, format!("N={} {}", b.level, b.label))?;
    }
    for level in 1..=41u64 {
        verify(&build_case(level, "1").e1, format!("N={level}"))?;
    }
    for level in 2..=20u64 {
        let g = CharacterGroup::new(level, next_admissible_prime(level, 1000)).unwrap();
        for eta in g.all().into_iter().skip(1) {
            let (_, e1) = build(cells(), &eta).unwrap();
            verify(&e1, format!("N={level} {}", eta.ascii_label()))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for degree in 2..=4usize {
        let mut done = 0;
        while done < 1000 {
            let cols: Vec<IVec> = (0..4 + degree).map(|_| random_vec(&mut rng)).collect();
            let mut chain = SharblyChain::new();
            chain.add_raw(4, &cols, 1).unwrap();
            if chain.is_zero() {
                continue;
            }
            let dd = chain.boundary().unwrap().boundary().unwrap();
            check(dd.is_zero(), format!("boundary squared nonzero on {cols:?}"))?;
            done += 1;
        }
    }
    Ok(format!("d1 d2 = 0 on {built} complexes; boundary squared zero on 1000 sharblies in degrees 2, 3, 4"))
}

/// L for the round trip. 2 and 3 divide 24, and the quadratic characters
/// mod 24 are only told apart by one prime in each nontrivial class.
fn round_trip_primes(level: u64) -> Vec<u64> {
    if level == 24 {
        vec![5, 7, 11, 13, 17, 19, 23]
    } else {
        vec![2, 3, 5, 7]
    }
}

fn criterion_4a() -> Outcome {
    let mut summary = Vec::new();
    for (level, p, r) in [(11u64, 4001u64, 2usize), (13, 12037, 1), (24, 12379, 2), (41, 21881, 60)] {
        let t = Instant::now();
        let db = Database::shipped(level, ExtField::new(p, r).unwrap()).unwrap();
        let eta = db.group().trivial();
        let primes = round_trip_primes(level);
        let finder = Finder::new(&db, &eta, &primes).unwrap();
        let modes: Vec<(u64, bool)> = primes.iter().map(|&l| (l, true)).collect();
        let (l1, l2, l3) = (db.l1(), db.l2(), db.l3());
        let mut rng = ChaCha8Rng::seed_from_u64(level);
        let (mut unique, mut coincident, mut trials) = (0, 0, 0);
        while trials < 200 {
            let shape: &[usize] = match rng.gen_range(0..4) {
                0 => &[1, 1, 1, 1],
                1 => &[1, 1, 2],
                2 => &[2, 2],
                _ => &[1, 3],
            };
            let mut cs: Vec<Constituent> = shape
                .iter()
                .map(|&d| *[&l1, &l2, &l3][d - 1].choose(&mut rng).unwrap())
                .collect();
            cs.sort();
            if cs.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            trials += 1;
            let sys = system_of_eigenspace(db.field(), &finder.synthesize(&cs, &modes).unwrap()).unwrap();
            let out = finder.find(&sys).unwrap();
            let found = out.assignments.iter().any(|a| a.constituents == cs);
            let name = ascii_representation(&db, &cs);
            check(found, format!("N={level}: {name} not recovered"))?;
            check(out.unique || out.coincident, format!("N={level}: {name} ambiguous, separated at {:?}", out.separating_primes))?;
            if out.unique {
                unique += 1;
            } else {
                coincident += 1;
            }
        }
        let secs = t.elapsed().as_secs_f64();
        check(secs < 300.0, format!("N={level} took {secs:.0} s"))?;
        summary.push(format!("N={level}: {unique} unique, {coincident} coincident"));
    }
    Ok(summary.join("; "))
}

struct Table {
    level: u64,
    eta: String,
    p: u64,
    r: usize,
    modes: Vec<(u64, bool)>,
    rows: Vec<(usize, String)>,
}

fn tables() -> Vec<Table> {
    let text = include_str!("data/tables.txt");
    let mut out: Vec<Table> = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')) {
        let (key, rest) = line.split_once(' ').unwrap();
        match key {
            "TABLE" => {
                let v: Vec<&str> = rest.split(' ').collect();
                out.push(Table {
                    level: v[0].parse().unwrap(),
                    eta: v[1].to_string(),
                    p: v[2].parse().unwrap(),
                    r: v[3].parse().unwrap(),
                    modes: Vec::new(),
                    rows: Vec::new(),
                });
            }
            "COMPUTED" => {
                out.last_mut().unwrap().modes = rest
                    .split(' ')
                    .map(|x| match x.split_once(':') {
                        Some((l, _)) => (l.parse().unwrap(), false),
                        None => (x.parse().unwrap(), true),
                    })
                    .collect();
            }
            "ROW" => {
                let v: Vec<&str> = rest.splitn(3, ' ').collect();
                out.last_mut().unwrap().rows.push((v[0].parse().unwrap(), v[2].to_string()));
            }
            _ => panic!("bad fixture line {line}"),
        }
    }
    out
}

fn criterion_4b() -> Outcome {
    let (mut rows, mut orbits) = (0, 0);
    let tables = tables();
    for t in &tables {
        let start = Instant::now();
        let db = Database::shipped(t.level, ExtField::new(t.p, t.r).unwrap()).unwrap();
        let eta = db.group().parse_label(&t.eta).unwrap();
        let primes: Vec<u64> = t.modes.iter().map(|m| m.0).collect();
        let finder = Finder::new(&db, &eta, &primes).unwrap();
        for (gm, rep) in &t.rows {
            let what = format!("N={} {}: {rep}", t.level, t.eta);
            let cs = parse_representation(&finder, rep).map_err(|e| format!("{what}: {e}"))?;
            let sys = system_of_eigenspace(db.field(), &finder.synthesize(&cs, &t.modes).unwrap()).unwrap();
            let out = finder.find(&sys).unwrap();
            let hit = out.assignments.iter().find(|a| a.constituents == cs);
            check(hit.is_some_and(|a| a.ht_ok && a.det_ok), format!("{what}: not recovered with HT and det checks"))?;
            let orbit = finder.galois_orbit(&cs).unwrap().len();
            check(orbit == *gm, format!("{what}: Galois multiplicity {orbit}, table says {gm}"))?;
            rows += 1;
            orbits += usize::from(*gm > 1);
        }
        check(start.elapsed().as_secs() < 300, format!("N={} took too long", t.level))?;
    }
    let n23: Vec<usize> = tables.iter().filter(|t| t.level == 23 && t.eta == "1").flat_map(|t| t.rows.iter().map(|r| r.0)).collect();
    check(n23 == [2, 2, 1], format!("N=23 multiplicities {n23:?}"))?;
    Ok(format!("{rows} rows in {} tables recovered, {orbits} with Galois multiplicity > 1", tables.len()))
}

fn criterion_5() -> Outcome {
    let cases = [
        (24u64, "chi_24_0*chi_24_1*chi_24_2", 12379u64, 2usize, "sigma_24_2c"),
        (28, "chi_28_0*chi_28_1^3", 12379, 12, "sigma_28_2c"),
    ];
    let mut summary = Vec::new();
    for (level, label, p, r, form) in cases {
        let t = tables().into_iter().find(|t| t.level == level && t.eta == label).unwrap();
        let db = Database::shipped(level, ExtField::new(p, r).unwrap()).unwrap();
        let eta = db.group().parse_label(label).unwrap();
        let primes: Vec<u64> = t.modes.iter().map(|m| m.0).collect();
        let finder = Finder::new(&db, &eta, &primes).unwrap();
        for (_, rep) in t.rows.iter().filter(|(_, rep)| rep.contains(form)) {
            let cs = parse_representation(&finder, rep).unwrap();
            let sys = system_of_eigenspace(db.field(), &finder.synthesize(&cs, &t.modes).unwrap()).unwrap();
            let out = finder.find(&sys).unwrap();
            let reduction = cs.iter().find_map(|c| match c.base {
                Base::Newform(i) => Some(i),
                _ => None,
            });
            // assignments through the same embedding of the form's coefficient field
            let same: Vec<_> = out
                .assignments
                .iter()
                .filter(|a| a.constituents.iter().any(|c| c.base == Base::Newform(reduction.unwrap())))
                .collect();
            check(same.len() == 2, format!("{rep}: {} assignments through one embedding", same.len()))?;
            check(out.coincident, format!("{rep}: not flagged coincident"))?;
            let mut compared = 0;
            for ell in (2..1000u64).filter(|&l| sl4coh::ffield::is_prime(l) && (p * level) % l != 0) {
                let covered = |a: &&sl4coh::finder::Assignment| a.constituents.iter().all(|c| db.has_data(c.base, ell));
                if !same.iter().all(covered) {
                    continue;
                }
                let x = finder.sum_poly(&same[0].constituents, ell).unwrap();
                let y = finder.sum_poly(&same[1].constituents, ell).unwrap();
                check(x == y, format!("{rep}: systems differ at {ell}"))?;
                compared += 1;
            }
            check(compared >= 160, format!("{rep}: only {compared} primes compared"))?;
            summary.push(format!(
                "N={level} {rep}: {} and {} equal at {compared} primes",
                ascii_representation(&db, &same[0].constituents),
                ascii_representation(&db, &same[1].constituents)
            ));
        }
    }
    Ok(summary.join("; "))
}

/// Row reduced echelon form of vectors over F_l, as a canonical key.
fn rref_key(rows: &[[u64; 4]], l: u64) -> Vec<[u64; 4]> {
    let mut m: Vec<[u64; 4]> = rows.to_vec();
    let inv = |a: u64| (1..l).find(|b| a * b % l == 1).unwrap();
    let mut r = 0;
    for c in 0..4 {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let s = inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = *x * s % l;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..4 {
                    m[i][j] = (m[i][j] + l * l - f * m[r][j]) % l;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Number of k-dimensional subspaces of F_l^4 by enumeration.
fn subspace_count(l: u64, k: usize) -> u64 {
    let vectors: Vec<[u64; 4]> = (0..l.pow(4)).map(|i| [i % l, i / l % l, i / (l * l) % l, i / (l * l * l)]).collect();
    match k {
        0 | 4 => 1,
        1 | 2 => {
            let mut seen = HashSet::new();
            let mut stack = vec![Vec::new()];
            while let Some(t) = stack.pop() {
                if t.len() == k {
                    let key = rref_key(&t, l);
                    if key.len() == k {
                        seen.insert(key);
                    }
                    continue;
                }
                for v in vectors.iter().skip(1) {
                    let mut u = t.clone();
                    u.push(*v);
                    stack.push(u);
                }
            }
            seen.len() as u64
        }
        _ => {
            // kernels of nonzero functionals
            let mut seen = HashSet::new();
            for f in vectors.iter().skip(1) {
                let ker: Vec<[u64; 4]> = vectors.iter().filter(|v| (0..4).map(|i| f[i] * v[i]).sum::<u64>() % l == 0).copied().collect();
                seen.insert(ker);
            }
            seen.len() as u64
        }
    }
}

fn criterion_6() -> Outcome {
    for l in [2u64, 3, 5, 7] {
        for k in 0..=4usize {
            let reps = single_coset_reps(4, l, k);
            let oracle = subspace_count(l, k);
            check(reps.len() as u64 == oracle, format!("l={l} k={k}: {} reps, {oracle} subspaces", reps.len()))?;
            check(gaussian_binomial(4, k, l) == oracle, format!("l={l} k={k}: binomial mismatch"))?;
            check(reps.iter().all(|g| g.det() == (l as i64).pow(k as u32)), format!("l={l} k={k}: wrong determinant"))?;
            if l <= 3 {
                for (i, a) in reps.iter().enumerate() {
                    for b in &reps[..i] {
                        // a b^{-1} integral means the same coset
                        let same = a.mul(&b.adjugate()).div_exact(b.det()).is_some();
                        check(!same, format!("l={l} k={k}: repeated coset"))?;
                    }
                }
            }
        }
    }
    Ok(format!("counts match subspace enumeration, e.g. (2,1) -> {}, (2,2) -> {}", single_coset_reps(4, 2, 1).len(), single_coset_reps(4, 2, 2).len()))
}

fn criterion_7() -> Outcome {
    // operators computed on H_1 through the Voronoi-supported path
    for b in table_cases().iter().filter(|b| b.level <= 13) {
        let h1 = b.e1.homology_h1().unwrap();
        let s = &b.structure;
        let oracle = TrivialOracle { structure: s };
        let mut alg = HeckeAlgebra::new(4, h1.dim(), s.field().clone(), s.eta().clone());
        for ell in [2u64, 3, 5, 7] {
            for k in [0, 4] {
                let op = hecke_matrix_via_oracle(s, &h1, ell, k, &oracle).unwrap();
                alg.insert(op).map_err(|e| format!("N={} {}: {e}", b.level, b.label))?;
            }
        }
    }
    // synthetic operators: two eigenpackets in a random basis
    let db = Database::shipped(11, ExtField::new(4001, 2).unwrap()).unwrap();
    let f = db.field().clone();
    let eta = db.group().trivial();
    let primes = [2u64, 3, 5, 7];
    let finder = Finder::new(&db, &eta, &primes).unwrap();
    let modes: Vec<(u64, bool)> = primes.iter().map(|&l| (l, true)).collect();
    let sums = ["eps0 + eps1 + eps2*sigma_11_2", "eps2 + eps3 + eps0*sigma_11_2", "eps0 + eps1 + eps2 + eps3"];
    let packets: Vec<_> = sums.iter().map(|s| finder.synthesize(&parse_representation(&finder, s).unwrap(), &modes).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let dim = packets.len();
    let (basis, inverse) = loop {
        let m = DenseMatrix::from_rows(f.clone(), (0..dim).map(|_| (0..dim).map(|_| f.random(&mut rng)).collect()).collect(), dim);
        if m.rank() == dim {
            let cols: Vec<_> = (0..dim).map(|j| m.solve(&DenseMatrix::identity(f.clone(), dim).column(j)).unwrap()).collect();
            break (m, DenseMatrix::from_columns(f.clone(), &cols, dim));
        }
    };
    let op = |ell: u64, k: usize| {
        let mut d = DenseMatrix::zeros(f.clone(), dim, dim);
        for (i, p) in packets.iter().enumerate() {
            d.set(i, i, p.get(ell, k).cloned().unwrap());
        }
        HeckeOperator { ell, k, matrix: basis.mul(&d).mul(&inverse) }
    };
    let mut alg = HeckeAlgebra::new(4, dim, f.clone(), eta.clone());
    for &ell in &primes {
        for k in 0..=4 {
            alg.insert(op(ell, k)).map_err(|e| format!("synthetic T({ell},{k}): {e}"))?;
        }
    }
    let spaces = simultaneous_eigenspaces(&alg).unwrap();
    check(spaces.len() == dim, "synthetic operators do not split into three eigenspaces")?;
    check(spaces.iter().all(|s| packets.contains(&s.packet)), "eigenspace packets differ from the synthesized ones")?;
    // violations are refused
    let mut bad = HeckeAlgebra::new(4, dim, f.clone(), eta.clone());
    let mut t4 = op(2, 4);
    t4.matrix = t4.matrix.mul(&DenseMatrix::scalar(f.clone(), dim, f.from_i64(2)));
    check(matches!(bad.insert(t4), Err(HeckeError::NotCentral { .. })), "T(2,4) != eta(2) I accepted")?;
    let mut t0 = op(2, 0);
    t0.matrix.set(0, 1, f.one());
    check(bad.insert(t0).is_err(), "T(2,0) != I accepted")?;
    bad.insert(op(2, 1)).unwrap();
    let mut other = op(3, 1);
    other.matrix.set(0, 1, f.add(other.matrix.get(0, 1), &f.one()));
    check(matches!(bad.insert(other), Err(HeckeError::NotCommuting { .. })), "non-commuting operator accepted")?;
    Ok("T(l,0) = I, T(l,4) = eta(l) I and commutation hold on oracle and synthetic operators; violations refused".into())
}

/// (label, N, p, order, odd, generator values) for each character table row.
const CHARACTER_ROWS: &[(&str, u64, u64, u64, bool, &[(i64, i64)])] = &[
    ("chi_7", 7, 12037, 6, true, &[(3, -1293)]),
    ("chi_9", 9, 12379, 6, true, &[(2, 5770)]),
    ("chi_12_0", 12, 5413, 2, true, &[(7, -1), (5, 1)]),
    ("chi_12_1", 12, 5413, 2, true, &[(7, 1), (5, -1)]),
    ("chi_13", 13, 12037, 12, true, &[(2, 4019)]),
    ("chi_15_0", 15, 12037, 2, true, &[(11, -1), (7, 1)]),
    ("chi_15_1", 15, 12037, 4, true, &[(11, 1), (7, 3417)]),
    ("chi_16_0", 16, 4001, 2, true, &[(15, -1), (5, 1)]),
    ("chi_16_1", 16, 4001, 4, false, &[(15, 1), (5, -899)]),
    ("chi_17", 17, 16001, 16, true, &[(3, 83)]),
    ("chi_18", 18, 3637, 6, true, &[(11, -695)]),
    ("chi_19", 19, 3637, 18, true, &[(2, -31)]),
    ("chi_20_0", 20, 12037, 2, true, &[(11, -1), (17, 1)]),
    ("chi_20_1", 20, 12037, 4, true, &[(11, 1), (17, 3417)]),
    ("chi_21_0", 21, 12037, 2, true, &[(8, -1), (10, 1)]),
    ("chi_21_1", 21, 12037, 6, true, &[(8, 1), (10, -1293)]),
    ("chi_22", 22, 16001, 10, true, &[(13, 3018)]),
    ("chi_23", 23, 22067, 22, true, &[(5, 7863)]),
    ("chi_24_0", 24, 12379, 2, true, &[(7, -1), (13, 1), (17, 1)]),
    ("chi_24_1", 24, 12379, 2, false, &[(7, 1), (13, -1), (17, 1)]),
    ("chi_24_2", 24, 12379, 2, true, &[(7, 1), (13, 1), (17, -1)]),
    ("chi_25", 25, 16001, 20, true, &[(2, 7734)]),
    ("chi_26", 26, 12037, 12, true, &[(15, 4019)]),
    ("chi_27", 27, 11863, 18, true, &[(2, 5034)]),
    ("chi_28_0", 28, 12379, 2, true, &[(15, -1), (17, 1)]),
    ("chi_28_1", 28, 12379, 6, true, &[(15, 1), (17, 5770)]),
    ("chi_29", 29, 2297, 28, true, &[(2, 1108)]),
    ("chi_31", 31, 4201, 30, true, &[(3, -1970)]),
    ("chi_37", 37, 3889, 36, true, &[(2, -1338)]),
    ("chi_41", 41, 21881, 40, true, &[(6, -10354)]),
];

fn exact_order(f: &PrimeField, a: Fp) -> u64 {
    (1..=f.p() as u64).find(|&e| f.powp(a, e) == Fp(1)).unwrap()
}

fn criterion_8() -> Outcome {
    for &(label, n, p, order, odd, values) in CHARACTER_ROWS {
        let g = CharacterGroup::new(n, p).map_err(|e| format!("{label}: {e}"))?;
        let chi = g.parse_label(label).map_err(|e| format!("{label}: {e}"))?;
        check(chi.order() == order, format!("{label}: order {} not {order}", chi.order()))?;
        check(chi.is_even() != odd, format!("{label}: wrong parity"))?;
        let f = g.field();
        let minus_one = f.elem(-1);
        // the stated values generate the character: chi(-1) is a word in them
        let mut stated_minus_one = None;
        for &(gen, v) in values {
            let v = f.elem(v);
            let ours = chi.eval(gen);
            if v == Fp(1) || v == minus_one {
                check(ours == v, format!("{label}: value at {gen} differs"))?;
            } else {
                check(exact_order(f, v) == order, format!("{label}: stated value at {gen} has the wrong order"))?;
                check(exact_order(f, ours) == order, format!("{label}: our value at {gen} has the wrong order"))?;
            }
            // -1 is a power of gen when gen generates the cyclic part holding -1
            let modn = |x: u64| x % n;
            let mut x = 1u64;
            for e in 1..=n {
                x = modn(x * gen as u64);
                if x == n - 1 && values.len() == 1 {
                    stated_minus_one = Some(f.powp(v, e));
                    break;
                }
            }
        }
        if let Some(s) = stated_minus_one {
            check((s == minus_one) == odd, format!("{label}: stated value contradicts the parity"))?;
        }
    }
    let f = PrimeField::new(12037).unwrap();
    check(f.powp(f.elem(-1293), 3) == f.elem(-1), "(-1293)^3 != -1 mod 12037")?;
    Ok(format!("{} rows: order and parity reproduced, stated values consistent", CHARACTER_ROWS.len()))
}

fn criterion_9() -> Outcome {
    let records = load_newforms(&default_newform_dir(), 11).unwrap();
    let rec = records.iter().find(|r| r.label == "sigma_11_2").ok_or("sigma_11_2 missing")?;
    let field = ExtField::new(4001, 1).unwrap();
    let red = reduce(rec, 0, &field).unwrap();
    check(red.len() == 1, "sigma_11_2 should have one reduction")?;
    let mut n = 0;
    for ell in (2..=100u64).filter(|&l| sl4coh::ffield::is_prime(l) && l != 11) {
        let a = ap_from_elliptic_curve([0, -1, 1, -10, -20], ell).map_err(|e| e.to_string())?;
        check((a * a) as u64 <= 4 * ell, format!("Hasse bound fails at {ell}"))?;
        let shipped = red[0].ap(ell).ok_or(format!("no a_{ell}"))?;
        check(*shipped == field.from_i64(a), format!("a_{ell}: curve gives {a}"))?;
        n += 1;
    }
    check(ap_from_elliptic_curve([0, -1, 1, -10, -20], 11).is_err(), "11 should be bad")?;
    Ok(format!("{n} good primes up to 100 agree"))
}

fn criterion_10() -> Outcome {
    let f = PrimeField::new(12037).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let a = f.elem(rng.gen_range(0..12037));
        let mut x = PolySystem::new(f.clone(), 1);
        x.insert_partial(2, f.negp(a));
        let mut y = PolySystem::new(f.clone(), 1);
        y.insert_full(2, vec![Fp(1), a]).unwrap();
        let prod = x.mul(&y).unwrap();
        check(prod.get(2).unwrap().linear(&f) == Fp(0), "(1 - aX)(1 + aX) != 1 mod X^2")?;
        let mut one = PolySystem::new(f.clone(), 1);
        one.insert_partial(2, Fp(0));
        let mut d = PolySystem::new(f.clone(), 1);
        d.insert_full(2, vec![Fp(1), f.negp(a)]).unwrap();
        let inv = one.quotient(&d).unwrap();
        check(inv.get(2).unwrap().linear(&f) == a, "inverse of 1 - aX is not 1 + aX mod X^2")?;
    }
    let mut small = PolySystem::new(f.clone(), 1);
    small.insert_full(2, vec![Fp(1), Fp(1)]).unwrap();
    let big = PolySystem::product(f.clone(), &[2], [&small, &small]).unwrap();
    check(matches!(small.quotient(&big), Err(SystemError::DegreeUnderflow { dividend: 1, divisor: 2 })), "underflow accepted")?;
    Ok("1000 random a; degree underflow refused".into())
}

/// Runs without the libtest harness so the per-criterion lines always print.
fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("1 boundary matrix sizes at N=41", criterion_1),
        ("2 homology dimensions", criterion_2),
        ("3 chain complex sanity", criterion_3),
        ("4a finder round trip", criterion_4a),
        ("4b table rows recovered", criterion_4b),
        ("5 dihedral coincidences", criterion_5),
        ("6 coset counts", criterion_6),
        ("7 Hecke identities", criterion_7),
        ("8 character table", criterion_8),
        ("9 elliptic curve oracle", criterion_9),
        ("10 partial polynomial algebra", criterion_10),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(msg) => println!("criterion {name}: PASS ({secs:.1} s) {msg}"),
            Err(msg) => {
                println!("criterion {name}: FAIL ({secs:.1} s) {msg}");
                failed.push(name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
