//! Generalized Phan geometries of type `A_n` over finite fields.
//!
//! The crate builds the geometries from a flag and a family of
//! sigma-hermitian forms, forms their order complexes, computes integral
//! reduced homology through Smith normal form and checks sphericity and the
//! Cohen-Macaulay property, including a stage-by-stage replay of the
//! filtration argument that proves them.

pub mod cli;
pub mod complex;
pub mod error;
pub mod field;
pub mod filtration;
pub mod forms;
pub mod homology;
pub mod linalg;
pub mod phan;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Fe, Field, FieldParams};
