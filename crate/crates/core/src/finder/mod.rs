//! Polynomial systems and the search for direct sums of known Galois
//! representations matching a Hecke eigenspace.

mod report;
mod search;
mod system;

pub use report::{ascii_representation, parse_report, parse_representation, representation, ReportError, ReportRow, ReportTable};
pub use search::{
    classify_pattern, galois_multiplicity, system_of_eigenspace, Assignment, Finder, FinderError, FinderOutcome, Pattern,
};
pub use system::{LocalPoly, PolySystem, SystemError};
