//! Exact integer linear algebra: matrices, normal forms and superlattices.

mod lattice;
mod matrix;
mod normal_form;

pub use lattice::{
    coset_representatives, dual_membership, group_structure, Cosets, FracVec, GroupStructure,
    SuperLattice,
};
pub use matrix::IntMatrix;
pub use normal_form::{hermite_normal_form, smith_normal_form};
