use sl4coh::dirichlet::CharacterGroup;
use sl4coh::ffield::{next_admissible_prime, Field};
use sl4coh::hecke::{hecke_matrix_via_oracle, HeckeAlgebra, HeckeError, TrivialOracle};
use sl4coh::orbitcomplex::build;
use sl4coh::voronoi::enumerate_cell_classes;

#[test]
fn oracle_path_scalar_operators() {
    let complex = enumerate_cell_classes(4).unwrap();
    for (level, label) in [(11u64, "1"), (13, "chi_13^2")] {
        let g = CharacterGroup::new(level, next_admissible_prime(level, 1000)).unwrap();
        let eta = g.parse_label(label).unwrap();
        let (s, e1) = build(&complex, &eta).unwrap();
        let h1 = e1.homology_h1().unwrap();
        let oracle = TrivialOracle { structure: &s };
        let mut alg = HeckeAlgebra::new(4, h1.dim(), s.field().clone(), eta.clone());
        for ell in [2u64, 3, 5] {
            let t0 = hecke_matrix_via_oracle(&s, &h1, ell, 0, &oracle).unwrap();
            let t4 = hecke_matrix_via_oracle(&s, &h1, ell, 4, &oracle).unwrap();
            assert_eq!(t4.matrix.as_scalar(), Some(s.field().from_prime(eta.eval(ell as i64))));
            alg.insert(t0).unwrap();
            alg.insert(t4).unwrap();
        }
        let t = hecke_matrix_via_oracle(&s, &h1, 2, 1, &oracle);
        assert!(matches!(t, Err(HeckeError::NotReduced)));
    }
}
