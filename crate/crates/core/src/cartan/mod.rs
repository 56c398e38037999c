//! Borcherds-Cartan data: the matrix, symmetrizers, the nu-table, the
//! symmetric form on the root and weight lattices, and the Weyl group.

mod datum;
mod lattice;
mod weyl;

pub use datum::{Datum, DatumSpec, IndexKind, IndexSpec, Label};
pub use lattice::{Coweight, RootVec, Weight};
pub use weyl::BraidOrder;
