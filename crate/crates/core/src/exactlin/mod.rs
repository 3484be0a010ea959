//! Exact scalars, dense matrices, polynomials and binary-form factorization.

pub mod binform;
pub mod factor;
pub mod matrix;
pub mod poly;
pub mod scalar;

pub use binform::{factor_binary_form, BinaryFactor, BinaryForm};
pub use matrix::{complete_basis, dot, rank_of, Matrix, Rref, Solution};
pub use poly::Poly;
pub use scalar::{rational_reconstruct, Field, Fp, Scalar};
