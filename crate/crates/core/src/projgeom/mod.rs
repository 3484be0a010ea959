//! Points, subspaces and arrangements in projective space over an exact
//! field. A dual point `y` stands for the hyperplane `Σ x_i y_i = 0`.

pub mod arrangement;
pub mod curve;
pub mod point;
pub mod subspace;

pub use arrangement::{combinations, quadric_monomials, quadric_space, span_dim, Arrangement, QuadricSpace};
pub use curve::{rnc_through, CurveThrough, RationalCurve};
pub use point::{incident, pairing, ProjPoint};
pub use subspace::LinearSubspace;
