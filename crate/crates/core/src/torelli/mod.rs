//! Torelli decisions with re-checkable certificates, and the workflow that
//! rebuilds a Steiner matrix from its unstable points.

pub mod decide;
pub mod reconstruct;
pub mod t3;

pub use decide::{
    candidates, decide_torelli, decide_torelli_with, verify_certificate, Certificate, Decision, Diagnostics,
    SearchLimits, Source, TorelliReason, Verdict,
};
pub use reconstruct::{
    reconstruct_from_unstable, splits_off, steiner_unstable_profile, ProfileComparison, ReconstructionReport,
    SummandScreen,
};
pub use t3::{check_t3, T3Report};
