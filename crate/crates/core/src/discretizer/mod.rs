//! Finite-difference matrices of kinetic energy operators on a uniform 1D
//! grid with Dirichlet ends, built two ways: by composing the building
//! blocks of an ordering, and from its linear parameters.

mod assemble;
mod grid;
mod profile;

pub use assemble::{
    action_difference, assemble_linear, assemble_terms, derivative_matrix, effective_potential,
    equivalence_defect, grid_json, staggered_difference, AssembledOperator, Provenance,
};
pub use grid::{Grid, Stencil};
pub use profile::{InverseMassFn, MassProfile};
