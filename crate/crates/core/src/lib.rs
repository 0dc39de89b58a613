//! Cohomology of congruence subgroups of SL_4(Z) with coefficients in finite
//! fields, Hecke operators on it, and identification of Galois
//! representations attached to the Hecke eigenclasses.

pub mod ffield;
pub mod lattice;
pub mod dirichlet;
pub mod sharbly;
pub mod sparsela;
pub mod voronoi;
pub mod orbitcomplex;
pub mod hecke;
pub mod constituents;
pub mod finder;

/// Exact rationals used by the reduction-theory layer.
pub type Rational = num_rational::BigRational;
