//! Exact computations on hyperplane arrangements: Steiner presentations,
//! unstable hyperplanes, Kronecker–Weierstrass certificates and a layered
//! Torelli decision.

pub mod cli;
pub mod error;
pub mod exactlin;
pub mod kw;
pub mod projgeom;
pub mod steiner;
pub mod torelli;
pub mod unstable;

pub use error::{Error, Result};
