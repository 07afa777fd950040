//! Exact integer linear algebra.

mod lattice;
mod matrix;
mod smith;

pub use lattice::{hermite_basis, left_kernel, solve_left, Solver};
pub use matrix::{unit_vector, vec_add, vec_is_zero, vec_sub, IntMatrix};
pub use smith::{smith_normal_form, SmithForm};
