//! Exact scalar arithmetic and exact linear algebra.

mod matrix;
mod scalar;
mod sparse;

pub use matrix::{ExactMatrix, Field, Matrix, RealMatrix};
pub use scalar::{parse_rational, rat, ratio, render_rational, GaussianRational, Rational};
pub use sparse::SparseSystem;
