//! Facets and faces of a full-dimensional polyhedral cone given by generators.

use std::collections::BTreeSet;

use super::exact::{dot, inverse, rank, Scalar};

/// A facet: its inward normal and the indices of the generators on it.
#[derive(Clone, Debug)]
pub struct Facet<T> {
    pub normal: Vec<T>,
    pub vertices: BTreeSet<usize>,
}

/// Facets of the cone spanned by `gens` (full-dimensional in R^d) by the
/// double description method: extreme rays of the dual cone
/// {f : f . v >= 0 for all generators v}, adding one constraint at a time.
pub fn facets<T: Scalar>(gens: &[Vec<T>]) -> Vec<Facet<T>> {
    let d = gens[0].len();
    // Initial simplicial cone on d independent generators.
    let mut basis = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let mut rows: Vec<Vec<T>> = basis.iter().map(|&j: &usize| gens[j].clone()).collect();
        rows.push(g.clone());
        if rank(&rows) == rows.len() {
            basis.push(i);
        }
        if basis.len() == d {
            break;
        }
    }
    assert_eq!(basis.len(), d, "generators do not span");
    let b: Vec<Vec<T>> = basis.iter().map(|&i| gens[i].clone()).collect();
    let inv = inverse(&b).unwrap();
    // Columns of B^{-1} are dual to the rows of B.
    let mut rays: Vec<Vec<T>> = (0..d).map(|j| (0..d).map(|i| inv[i][j].clone()).collect()).collect();
    let mut added: Vec<usize> = basis.clone();
    let zero_set = |ray: &Vec<T>, added: &[usize]| -> BTreeSet<usize> {
        added.iter().copied().filter(|&i| dot(ray, &gens[i]).is_zero()).collect()
    };
    for (i, g) in gens.iter().enumerate() {
        if basis.contains(&i) {
            continue;
        }
        let vals: Vec<T> = rays.iter().map(|r| dot(r, g)).collect();
        let zs: Vec<BTreeSet<usize>> = rays.iter().map(|r| zero_set(r, &added)).collect();
        let mut next: Vec<Vec<T>> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if *v >= T::zero() {
                next.push(r.clone());
            }
        }
        for p in 0..rays.len() {
            if vals[p] <= T::zero() {
                continue;
            }
            for q in 0..rays.len() {
                if vals[q] >= T::zero() {
                    continue;
                }
                let common: BTreeSet<usize> = zs[p].intersection(&zs[q]).copied().collect();
                if common.len() + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|r| r == p || r == q || !common.is_subset(&zs[r]));
                if !adjacent {
                    continue;
                }
                let (a, c) = (vals[p].clone(), -vals[q].clone());
                let ray: Vec<T> = rays[q]
                    .iter()
                    .zip(&rays[p])
                    .map(|(x, y)| a.clone() * x.clone() + c.clone() * y.clone())
                    .collect();
                next.push(ray);
            }
        }
        added.push(i);
        rays = next;
    }
    let all: Vec<usize> = (0..gens.len()).collect();
    rays.into_iter()
        .map(|r| {
            let vertices = zero_set(&r, &all);
            Facet { normal: r, vertices }
        })
        .collect()
}

/// The smallest face containing the given generators: the generators lying
/// on every facet through them.
pub fn closure<T>(facets: &[Facet<T>], n_gens: usize, subset: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut cl: BTreeSet<usize> = (0..n_gens).collect();
    for f in facets {
        if subset.is_subset(&f.vertices) {
            cl = cl.intersection(&f.vertices).copied().collect();
        }
    }
    cl
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn square_pyramid_cone() {
        // Cone over a square: four facets, each with two generators.
        let gens = vec![q(&[1, 1, 1]), q(&[1, -1, 1]), q(&[-1, -1, 1]), q(&[-1, 1, 1])];
        let f = facets(&gens);
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|x| x.vertices.len() == 2));
        let cl = closure(&f, 4, &[0, 2].into_iter().collect());
        assert_eq!(cl.len(), 4);
        let cl = closure(&f, 4, &[0, 1].into_iter().collect());
        assert_eq!(cl, [0, 1].into_iter().collect());
    }

    #[test]
    fn simplicial_cone() {
        let gens = vec![q(&[1, 0, 0]), q(&[0, 1, 0]), q(&[0, 0, 1])];
        assert_eq!(facets(&gens).len(), 3);
    }
}
