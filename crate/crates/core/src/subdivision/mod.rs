//! Regular subdivisions of matroid polytopes and their tight spans.

mod complex;
pub mod dd;
mod tight_span;
mod weight;

pub use complex::{Adjacency, Cell, Codim2Face, SubdivisionComplex, SubdivisionError, Witness};
pub use tight_span::{tight_span, Branch, Fin, LeafPair, Subcomplex, TightSpan, TsEdge, TsFace};
pub use weight::{Entry, Weight, WeightError, WeightJson};

/// The regular subdivision of the ambient matroid polytope induced by `w`.
pub fn regular_subdivision(w: &Weight) -> Result<SubdivisionComplex, SubdivisionError> {
    SubdivisionComplex::new(w)
}

pub fn is_matroidal(s: &SubdivisionComplex) -> bool {
    s.is_matroidal()
}
