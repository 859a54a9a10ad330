//! Exact linear algebra over the rationals.

mod diagram;
mod map;
mod matrix;
pub mod scalar;

pub use diagram::{Arrow, Colimit, DiagramOfSpaces, Limit};
pub use map::LinearMap;
pub use matrix::{vector_strings, Matrix, Rref};
pub use scalar::{format_scalar, parse_scalar, Scalar, Vector};
