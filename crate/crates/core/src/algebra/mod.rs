//! Exact arithmetic over small finite fields.

mod field;
mod matrix;
mod poly;
mod quadratic;

pub use field::{Elem, Field};
pub use matrix::Matrix;
pub use poly::Poly;
pub use quadratic::solve_artin_schreier;
