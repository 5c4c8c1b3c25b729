//! Subspaces of `F_q^n`: canonical forms, lattice operations, complements,
//! direct-sum projections, quotients, flags and exhaustive enumeration.

mod decomposition;
mod enumerate;
pub mod matrix;
mod subspace;

pub use decomposition::{Decomposition, Quotient};
pub use enumerate::{
    enumerate_proper_subspaces, enumerate_subspaces, enumerate_vectors, gaussian_binomial,
};
pub use matrix::{Matrix, Vector};
pub use subspace::{
    complement, complement_with, is_opposite, is_transversal, random_complement, ComplementPolicy,
    Flag, Subspace,
};
