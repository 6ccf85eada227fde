//! Exact computation of subalgebra depth in path algebras of acyclic quivers.
//!
//! The crate builds finite-dimensional path algebras from quiver
//! descriptions, carves out distinguished subalgebras (top, arrow, diagonal,
//! Jordan, or user-supplied), forms the relative tensor powers
//! `C_n(A,B) = A ⊗_B … ⊗_B A`, and decides bimodule divisibility between
//! consecutive powers to determine the minimum, odd and H-depth of the
//! extension. All arithmetic is exact (arbitrary-precision rationals or a
//! prime field), so every divisibility answer is a certified boolean.

pub mod algebra;
pub mod bimodule;
pub mod cli;
pub mod depth;
pub mod error;
pub mod exactlin;
pub mod families;
pub mod field;
pub mod homdiv;
pub mod quiver;
pub mod suite;

pub use error::{Error, Result};
