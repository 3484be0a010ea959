//! Steiner presentations of arrangement sheaves and their numerics.

pub mod build;
pub mod decompose;
pub mod forms;
pub mod hilbert;

pub use build::{build_steiner, degenerate_split, verify_steiner, DegenerateSplit, SteinerMatrix, SteinerReport};
pub use decompose::{decompose, local_arrangement, refine, Decomposition, Piece, PieceKind};
pub use forms::{LinForm, LinFormMatrix};
pub use hilbert::{hilbert_data, ResolutionData};
