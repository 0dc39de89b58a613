use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::ffield::PolyRing;

fn db(level: u64, p: u64, r: usize) -> Database {
    Database::shipped(level, ExtField::new(p, r).unwrap()).unwrap()
}

#[test]
fn l1_sizes_and_trivial_character() {
    let d1 = db(1, 4001, 1);
    assert_eq!(d1.l1().len(), 4);
    let d = db(11, 4001, 1);
    // ten characters mod 11, each with four powers of eps
    assert_eq!(d.l1().len(), 40);
    let f = d.field();
    let one = d.l1()[0];
    assert_eq!(d.label(&one), "eps0");
    for ell in [2u64, 3, 5, 7, 13] {
        assert_eq!(d.frob_poly(&one, ell).unwrap(), vec![f.one(), f.from_i64(-1)]);
        for c in d.l1() {
            let q = d.frob_poly(&c, ell).unwrap();
            assert_eq!(q.len(), 2);
            assert!(f.is_one(&q[0]));
        }
    }
}

#[test]
fn sigma_11_2_at_three() {
    let d = db(11, 4001, 1);
    let c = d.resolve("eps0*sigma_11_2").unwrap();
    assert_eq!(c.len(), 1, "a rational newform has one reduction");
    let f = d.field();
    assert_eq!(d.frob_poly(&c[0], 3).unwrap(), vec![f.one(), f.one(), f.from_i64(3)]);
    assert!(d.frob_poly(&c[0], 11).is_err());
}

#[test]
fn sym2_root_law() {
    let f = ExtField::new(101, 2).unwrap();
    let ring = PolyRing::new(&f);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let (al, be) = (f.random(&mut rng), f.random(&mut rng));
        let a = f.add(&al, &be);
        let d = f.mul(&al, &be);
        let lin = |r: &Fq| vec![f.one(), f.neg(r)];
        let expect = ring.mul(&ring.mul(&lin(&f.mul(&al, &al)), &lin(&d)), &lin(&f.mul(&be, &be)));
        assert_eq!(ring.normalize(sym2_poly(&f, &a, &d)), ring.normalize(expect));
    }
}

#[test]
fn twist_consistency_and_determinant_law() {
    let d = db(13, 12037, 1);
    let f = d.field();
    let fp = f.prime_field();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let all = d.all();
    use rand::Rng;
    for _ in 0..300 {
        let c = all[rng.gen_range(0..all.len())];
        for ell in [2u64, 3, 5, 7, 11, 17] {
            let q = d.frob_poly(&c, ell).unwrap();
            let deg = d.degree(&c);
            assert_eq!(q.len(), deg + 1);
            assert!(f.is_one(&q[0]));
            let base = d.base_poly(c.base, ell).unwrap();
            let s = d.twist_scalar(c.chi, c.w, ell);
            for (i, (x, y)) in q.iter().zip(&base).enumerate() {
                assert_eq!(*x, f.scale_prime(y, fp.powp(s, i as u64)));
            }
            let det = d.det_value(&c, ell).unwrap();
            let sign = if deg.is_multiple_of(2) { f.one() } else { f.from_i64(-1) };
            assert_eq!(q[deg], f.mul(&sign, &det));
        }
    }
}

#[test]
fn hodge_tate_rules() {
    let d = db(11, 4001, 1);
    let e = |l: &str| d.resolve(l).unwrap()[0];
    assert_eq!(d.hodge_tate(&e("eps3")), vec![3]);
    assert_eq!(d.hodge_tate(&e("eps2*sigma_11_2")), vec![2, 3]);
    assert_eq!(d.hodge_tate(&e("eps1*Sym2(sigma_11_2)")), vec![1, 2, 3]);
}

#[test]
fn labels_round_trip() {
    let d = db(24, 12379, 2);
    let all = d.all();
    for c in all.iter().step_by(7) {
        let a = d.label(c);
        assert!(d.resolve(&a).unwrap().contains(c), "{a}");
        let u = d.unicode_label(c);
        assert!(d.resolve(&u).unwrap().contains(c), "{u}");
    }
    let c = d.resolve("chi_24_0*chi_24_1*eps2").unwrap()[0];
    assert_eq!(d.unicode_label(&c), "χ_{24,0}χ_{24,1} ε^{2}");
    assert!(d.resolve("eps2*sigma_99_2").is_err());
    assert!(d.resolve("eps7").is_err());
    assert_eq!(normalize_label("ε^2 σ_{11,2}"), "eps2*sigma_11_2");
    assert_eq!(normalize_label("ε^1 Sym²(σ_{29,2d})"), "eps1*Sym2(sigma_29_2d)");
}

#[test]
fn conjugate_reductions_of_quadratic_form() {
    let d = db(23, 22067, 60);
    let c = d.resolve("eps0*sigma_23_2a").unwrap();
    assert_eq!(c.len(), 2);
    let f = d.field();
    let (x, y) = (d.frob_poly(&c[0], 2).unwrap(), d.frob_poly(&c[1], 2).unwrap());
    assert_ne!(x[1], y[1]);
    assert_eq!(d.galois_key(&c[0]), d.galois_key(&c[1]));
    // a_2 satisfies y^2 + y - 1 for this form: the traces sum to -1
    assert_eq!(f.add(&x[1], &y[1]), f.one());
}

#[test]
fn delta_is_in_l3_at_41() {
    let d = db(41, 21881, 1);
    let l3 = d.l3();
    for l in ["eps1*delta", "eps0*delta"] {
        let c = d.resolve(l).unwrap();
        assert_eq!(c.len(), 1);
        assert!(l3.contains(&c[0]));
        assert_eq!(d.degree(&c[0]), 3);
    }
    assert_eq!(d.l2().len(), d.l2_0().len() * d.l1().len());
}

#[test]
fn splitting_degrees() {
    let recs = load_newforms(&default_newform_dir(), 23).unwrap();
    // the table field for level 23 at 22067 is F_{p^60}
    assert_eq!(splitting_degree(&recs, 22067, 60).unwrap(), Some(60));
    let recs = load_newforms(&default_newform_dir(), 11).unwrap();
    assert_eq!(splitting_degree(&recs, 4001, 1).unwrap(), None);
    assert_eq!(splitting_degree(&recs, 4001, 6).unwrap(), Some(2));
}
