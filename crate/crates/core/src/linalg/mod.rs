//! Exact dense linear algebra over prime fields.

mod echelon;
mod field;
mod matrix;
mod row;

pub use echelon::{coordinates_in_quotient, EchelonBasis};
pub use field::{is_prime, Prime};
pub use matrix::{FpMatrix, Rref};
