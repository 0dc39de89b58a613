use std::time::Instant;

use sl4coh::sharbly;
use sl4coh::voronoi::{enumerate_cell_classes, export_cells, ingest_cells, perfect_forms};

#[test]
fn rank_four_cells_are_interior_simplices() {
    let t = Instant::now();
    let c = enumerate_cell_classes(4).unwrap();
    eprintln!("n=4 SL classes per degree {:?} in {:?}", c.class_counts(), t.elapsed());
    for classes in &c.degrees {
        for class in classes {
            assert!(sharbly::theta(4, &class.vertices).is_ok());
            assert!(class.stabilizer.iter().all(|g| g.det() == 1));
        }
    }
    let back = ingest_cells(&export_cells(&c)).unwrap();
    assert_eq!(back.class_counts(), c.class_counts());
}

#[test]
fn perfect_forms_rank_four() {
    let forms = perfect_forms(4).unwrap();
    let mut counts: Vec<usize> = forms.iter().map(|q| q.minimal_vectors().len()).collect();
    counts.sort();
    assert_eq!(counts, vec![10, 12]);
    assert!(forms.iter().all(|q| q.is_perfect()));
}
