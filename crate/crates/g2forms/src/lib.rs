//! Normal forms of symmetric endomorphisms of R^7 under the group G2 of
//! automorphisms of the 7-dimensional vector product, together with the
//! polar-coordinate parametrisation of orthogonal and symmetric matrices and
//! the 8-dimensional flexible division algebras built from them.

pub mod cayley;
pub mod divalg;
pub mod error;
pub mod normalform;
pub mod orthoparam;
pub mod sample;
pub mod symeig;
pub mod vecprod7;

pub use error::{Error, Result};

pub type Vec7 = nalgebra::SVector<f64, 7>;
pub type Mat7 = nalgebra::SMatrix<f64, 7, 7>;

/// Standard basis vector `e_{k+1}` (zero-based `k`).
pub fn basis(k: usize) -> Vec7 {
    let mut v = Vec7::zeros();
    v[k] = 1.0;
    v
}
