//! Unstable hyperplanes of Steiner sheaves: two exact tests and
//! exhaustive finite-field scans.

pub mod kernel;
pub mod scan;
pub mod sections;

pub use kernel::{is_unstable_matrix, verify_matrix_witness, MatrixTest, MatrixWitness};
pub use scan::{extra_points, point_count, scan_arrangement, scan_unstable, FastForms, ScanResult};
pub use sections::{
    forms_through, is_unstable_sections, rank_one_at, sections_with_h, verify_section_witness, witness_matrix,
    SectionTest,
};
