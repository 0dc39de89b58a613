//! Property tests for invariants across modules.

use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sl4coh::constituents::{sym2_poly, Database};
use sl4coh::dirichlet::CharacterGroup;
use sl4coh::ffield::{ExtField, Field, Fp, PolyRing, PrimeField};
use sl4coh::finder::{ascii_representation, parse_representation, Finder, PolySystem};
use sl4coh::hecke::gaussian_binomial;
use sl4coh::lattice::{self, IMat, IVec};
use sl4coh::sharbly::SharblyChain;
use sl4coh::sparsela::{kernel_basis, rank, SparseMatrix};
use sl4coh::voronoi::{cell_equivalence, enumerate_cell_classes, TruncatedVoronoiComplex};

fn cells() -> &'static TruncatedVoronoiComplex {
    static C: OnceLock<TruncatedVoronoiComplex> = OnceLock::new();
    C.get_or_init(|| enumerate_cell_classes(4).unwrap())
}

fn level_11() -> &'static Database {
    static D: OnceLock<Database> = OnceLock::new();
    D.get_or_init(|| Database::shipped(11, ExtField::new(4001, 2).unwrap()).unwrap())
}

/// A product of elementary matrices, so of determinant one.
fn sl4(ops: &[(usize, usize, i64)]) -> IMat {
    let mut g = IMat::identity(4);
    for &(i, j, c) in ops {
        if i != j {
            let mut e = IMat::identity(4);
            e.set(i, j, c);
            g = g.mul(&e);
        }
    }
    g
}

fn translate(g: &IMat, cell: &[IVec]) -> Vec<IVec> {
    cell.iter().map(|v| lattice::normalize(&g.apply(v)).0).collect()
}

fn elementary() -> impl Strategy<Value = Vec<(usize, usize, i64)>> {
    prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extension_field_axioms(seed in any::<u64>()) {
        let f = ExtField::new(101, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.frobenius(&f.add(&a, &b)), f.add(&f.frobenius(&a), &f.frobenius(&b)));
        if !f.is_zero(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &f.inv(&a).unwrap())));
        }
        prop_assert_eq!(f.pow(&a, 101 * 101 * 101), a);
    }

    #[test]
    fn characters_are_multiplicative(idx in 0usize..40, x in 1i64..1000, y in 1i64..1000) {
        let g = CharacterGroup::new(41, 21881).unwrap();
        let chi = &g.all()[idx];
        let f = g.field();
        prop_assert_eq!(chi.eval(x * y), f.mulp(chi.eval(x), chi.eval(y)));
        prop_assert_eq!(chi.eval(x + 41), chi.eval(x));
        prop_assert_eq!(chi.eval(-1) == Fp(1), chi.is_even());
    }

    #[test]
    fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(0u64..7, 6), 1..8)) {
        let f = PrimeField::new(7).unwrap();
        let dense: Vec<Vec<Fp>> = rows.iter().map(|r| r.iter().map(|&x| Fp(x as u32)).collect()).collect();
        let a = SparseMatrix::from_dense(f.clone(), &dense, 6);
        prop_assert_eq!(rank(&a), rank(&a.transpose()));
        let ker = kernel_basis(&a);
        prop_assert_eq!(ker.len() + rank(&a), a.ncols());
        for v in &ker {
            let mut x = vec![Fp(0); 6];
            for (j, c) in v {
                x[*j] = *c;
            }
            prop_assert!(a.apply(&x).iter().all(|y| *y == Fp(0)));
        }
    }

    #[test]
    fn cell_equivalence_is_an_equivalence(degree in 0usize..3, class in 0usize..8, g1 in elementary(), g2 in elementary()) {
        let classes = &cells().degrees[degree];
        let c = &classes[class % classes.len()].vertices;
        let (a, b) = (sl4(&g1), sl4(&g2));
        let c1 = translate(&a, c);
        let c2 = translate(&b.mul(&a), c);
        prop_assert!(cell_equivalence(4, c, c).is_some());
        let h = cell_equivalence(4, c, &c1);
        prop_assert!(h.is_some());
        prop_assert!(cell_equivalence(4, &c1, c).is_some());
        prop_assert!(cell_equivalence(4, &c1, &c2).is_some());
        prop_assert!(cell_equivalence(4, c, &c2).is_some());
        let h = h.unwrap();
        prop_assert_eq!(h.det().abs(), 1);
        let mut image = translate(&h, c);
        let mut target = c1.clone();
        image.sort();
        target.sort();
        prop_assert_eq!(image, target);
        for other in classes.iter().filter(|o| o.vertices != *c && o.gl_class != classes[class % classes.len()].gl_class) {
            prop_assert!(cell_equivalence(4, &c1, &other.vertices).is_none());
        }
    }

    #[test]
    fn sharbly_boundary_squares_to_zero(cols in prop::collection::vec(prop::array::uniform4(-4i64..=4), 6..=8)) {
        prop_assume!(cols.iter().all(|v| !lattice::is_zero(v)));
        let mut chain = SharblyChain::new();
        chain.add_raw(4, &cols, 1).unwrap();
        prop_assume!(!chain.is_zero());
        prop_assert!(chain.boundary().unwrap().boundary().unwrap().is_zero());
    }

    #[test]
    fn sharbly_relations(cols in prop::collection::vec(prop::array::uniform4(-4i64..=4), 5..=6), s in 2i64..4) {
        prop_assume!(cols.iter().all(|v| !lattice::is_zero(v)));
        let mut a = SharblyChain::new();
        a.add_raw(4, &cols, 1).unwrap();
        // swapping two columns negates, scaling a column changes nothing
        let mut swapped = cols.clone();
        swapped.swap(0, 1);
        let mut scaled = cols.clone();
        scaled[2] = scaled[2].map(|x| -s * x);
        let mut b = SharblyChain::new();
        b.add_raw(4, &swapped, 1).unwrap();
        b.add_raw(4, &cols, 1).unwrap();
        prop_assert!(b.is_zero());
        let mut c = SharblyChain::new();
        c.add_raw(4, &scaled, 1).unwrap();
        c.add_raw(4, &cols, -1).unwrap();
        prop_assert!(c.is_zero());
        prop_assert!(a.len() <= 1);
    }

    #[test]
    fn gaussian_binomial_symmetry(k in 0usize..=4, q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9, 11])) {
        prop_assert_eq!(gaussian_binomial(4, k, q), gaussian_binomial(4, 4 - k, q));
        // Pascal rule [4,k] = [3,k-1] + q^k [3,k]
        if k > 0 {
            prop_assert_eq!(gaussian_binomial(4, k, q), gaussian_binomial(3, k - 1, q) + q.pow(k as u32) * gaussian_binomial(3, k, q));
        }
    }

    #[test]
    fn system_quotient_undoes_product(c in prop::collection::vec(0u32..101, 6), partial in any::<bool>()) {
        let f = PrimeField::new(101).unwrap();
        let mut a = PolySystem::new(f.clone(), 2);
        let mut b = PolySystem::new(f.clone(), 2);
        for (i, ell) in [2u64, 3, 5].into_iter().enumerate() {
            a.insert_full(ell, vec![Fp(1), Fp(c[2 * i]), Fp(c[2 * i + 1])]).unwrap();
            b.insert_full(ell, vec![Fp(1), Fp(c[(2 * i + 2) % 6]), Fp(1)]).unwrap();
        }
        if partial {
            a.insert_partial(5, Fp(c[0]));
        }
        let q = a.mul(&b).unwrap().quotient(&b).unwrap();
        prop_assert!(q.agrees_with(&a) && a.agrees_with(&q));
        prop_assert!(b.divides(&a.mul(&b).unwrap()));
    }

    #[test]
    fn sym2_has_squared_roots(x in 1u32..97, y in 1u32..97) {
        let f = PrimeField::new(97).unwrap();
        let ring = PolyRing::new(&f);
        let (al, be) = (Fp(x), Fp(y));
        let poly = sym2_poly(&f, &f.addp(al, be), &f.mulp(al, be));
        for root in [f.mulp(al, al), f.mulp(al, be), f.mulp(be, be)] {
            // 1 - r X vanishes at X = 1/r
            prop_assert_eq!(ring.eval(&poly, &f.invp(root).unwrap()), Fp(0));
        }
    }

    #[test]
    fn representation_round_trip(picks in prop::collection::vec(any::<prop::sample::Index>(), 4)) {
        let db = level_11();
        let eta = db.group().trivial();
        let finder = Finder::new(db, &eta, &[2, 3, 5, 7]).unwrap();
        let l1 = db.l1();
        let l2 = db.l2();
        let mut cs = vec![picks[0].get(&l1).to_owned(), picks[1].get(&l1).to_owned(), picks[2].get(&l2).to_owned()];
        cs.sort();
        prop_assume!(cs[0] != cs[1]);
        let text = ascii_representation(db, &cs);
        let back = parse_representation(&finder, &text).unwrap();
        prop_assert_eq!(ascii_representation(db, &back), text);
        // labels name a form, not an embedding of its coefficient field:
        // the parsed sum is a Galois conjugate of the original
        let keys = |v: &[sl4coh::constituents::Constituent]| {
            let mut k: Vec<_> = v.iter().map(|c| db.galois_key(c)).collect();
            k.sort();
            k
        };
        prop_assert_eq!(keys(&back), keys(&cs));
    }
}
