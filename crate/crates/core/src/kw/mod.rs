//! Pencils of binary linear forms, their Kronecker canonical forms, and KW
//! varieties built from them.

pub mod certify;
pub mod kronecker;
pub mod pencil;
pub mod variety;

pub use certify::{kw_from_matrix, kw_from_unstable};
pub use kronecker::{
    column_block, jordan_block, kronecker_form, nilpotent_jordan, nilpotent_jordan_basis, Block, BlockKind, Inventory,
    KroneckerForm,
};
pub use pencil::{matrix_from_pencil, pencil_from_matrix, Pencil};
pub use variety::{kw_contains, kw_membership, kw_validate, matrix_from_kw, Component, KwReport, KwType, KwVariety, LinearPart};
