//! Generalized Phan geometries: membership, vertex sets, residues of a
//! member, and the restriction to `{W < U : W, <W, p> in the geometry}`.

mod delta;
mod geometry;
pub mod io;
mod residue;
mod spec;

pub use delta::{delta_restriction, DeltaBranch, DeltaCase, DeltaContext, DeltaRestriction};
pub use geometry::{is_family_member, is_member, k_of, member_k, vertices, GeometryVertexSet};
pub use residue::{
    family_residue_above, family_residue_below, residue_above, residue_below, ResidueAbove,
    ResidueBelow,
};
pub use spec::{BoundVerdict, PhanFamily, PhanSpec};
