//! Voronoi reduction theory in rank n <= 4: perfect forms, minimal vectors,
//! and the classes of Voronoi cells of cone dimension n, n + 1, n + 2.

mod cells;
mod cones;
pub mod exact;
mod forms;
mod io;

pub use cells::{
    cell_equivalence, enumerate_cell_classes, equivalences, is_interior, stabilizer, vertex_permutation, CellClass, Face,
    TruncatedVoronoiComplex, Vertices,
};
pub use cones::{closure, facets, Facet};
pub use forms::{perfect_forms, sym_coords, QuadForm};
pub use io::{export_cells, ingest_cells, read_cells, write_cells};

#[derive(Debug, thiserror::Error)]
pub enum VoronoiError {
    #[error("rank {0} is not supported")]
    BadRank(usize),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("face of dimension {dim} has {vertices} vertices and is not a simplex")]
    NotSimplex { dim: usize, vertices: usize },
    #[error("a face could not be matched to a cell class")]
    MissingFace,
    #[error("malformed cell file: {0}")]
    Malformed(String),
    #[error("cell data fails verification: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
