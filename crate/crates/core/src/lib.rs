//! Exact computations with graded abelian groups of the kind that occur as
//! K-theory of tensor products: tensor and Tor on a locally cyclic atom
//! class, free resolutions with explicit diagram chases, the signed Künneth
//! flip and the admissibility classifier built on it.

pub mod colimit;
pub mod error;
pub mod expr;
pub mod fg;
pub mod functors;
pub mod group;
pub mod kunneth;
pub mod linalg;
pub mod presentation;
pub mod resolution;
pub mod supernat;

pub use error::{Error, Result};
pub use expr::{canonicalize, parse_group, GradedGroupDoc, GroupExpr};
pub use functors::{oracle_tensor, oracle_tor, tensor, tensor_atoms, tor, tor_atoms, Limits};
pub use group::{is_isomorphic, Atom, Decomposition, GradedGroup};
pub use kunneth::{
    basic_restrictions_check, classify, collapse, flip_action, flip_is_identity, kunneth, necessary_check, Verdict,
};
pub use presentation::{decompose, smith_form, PresentationMatrix};
pub use supernat::{Exponent, SupernaturalNumber};
