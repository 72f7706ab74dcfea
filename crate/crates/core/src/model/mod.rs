//! The operator universe: atoms, direct sums, extended naturals, chain
//! sequences and structural profiles.

pub mod atom;
pub mod extnat;
pub mod profile;
pub mod seq;

pub use atom::{segment_meets_unit_circle, Atom, OperatorExpr, Point};
pub use extnat::{ExtIndex, ExtNat, Fin, Inf};
pub use profile::{atom_profile, direct_sum_profile, expr_profile, matrix_profile, power_profile, BoolSeq, StructuralProfile};
pub use seq::EvAffineSeq;
