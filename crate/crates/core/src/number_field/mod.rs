//! Number fields as polynomial residue rings, the tower ℚ ⊆ k ⊆ l, and the
//! relative norm.

mod field;
mod tower;

pub use field::{FieldElement, FieldTag, NumberField};
pub use tower::{build_tower, field_arithmetic, k_determinant, ArithOp, FieldTower, RelativeBasis};

#[cfg(test)]
mod tests;
