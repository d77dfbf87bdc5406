//! Exact computation of the graded Lie algebra `aut Q` of infinitesimal
//! holomorphic automorphisms of a nondegenerate CR model quadric
//! `Q = { Im w = <z,z> }`, where `<z,z>` is a tuple of Hermitian forms.
//!
//! Everything is computed in exact rational / Gaussian-rational arithmetic:
//! weight components `g_m` and their canonical bases, rigidity and
//! exceptionality decisions (with an independent second decision path),
//! genericity conditions, the commutative-algebra / RAQ bridge, and the
//! characteristic module with its graded quotient dimensions.
//!
//! Modules:
//! - [`exact`]: scalars and exact linear algebra (dense and sparse).
//! - [`poly`]: sparse weighted polynomials in the field ring `(z, w)` and the
//!   restricted ring `(z, zbar, u)`.
//! - [`quadric`]: the quadric data model, catalog, random generation, linear
//!   equivalence and the Hermitian solvability test.
//! - [`solver`]: the tangency identity as an exact linear system; weight
//!   components, decisions, normal forms, brackets.
//! - [`conditions`]: decidable genericity conditions (I) and (II) and the
//!   derived sufficient non-exceptionality test.
//! - [`raq`]: real commutative unital algebras, their quadrics, and the
//!   Poincare automorphism formula.
//! - [`charmod`]: the characteristic submodule of `(C[s])^k` and the
//!   polynomial solution space that mirrors it.

pub mod charmod;
pub mod conditions;
pub mod exact;
pub mod poly;
pub mod quadric;
pub mod raq;
pub mod solver;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate quadric: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A computation contradicted a proved statement; this always signals an
    /// implementation bug and is never swallowed.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
