//! Upper estimates of the Cheeger, modified Jammes and geodesic Cheeger
//! constants, and the inequalities relating them to the first Steklov
//! eigenvalue.

pub mod candidates;
pub mod levelset;
pub mod offsets;
pub mod report;
pub mod theorem;

pub use candidates::{enumerate_candidates, enumerate_for_graph, CandidateOptions, CandidateSet, CurveSystem, Segment, SegmentKind};
pub use levelset::{levelset_sweep, LevelMeasure, LevelSweep};
pub use offsets::{mesh_offset_measure, ChartLine};
pub use report::{estimate_constants, jammes_check, merge_levelset, with_sigma1, ConstantsReport, Witness};
pub use theorem::{assembled_constant, theorem1_case_calculator, CaseReport};

/// `l' cosh d / (A' + l' sinh d)`: the Cheeger quotient of the region
/// obtained by pushing a cut of length `l'` bounding area `A'` outward by
/// `d`.
pub fn offset_quotient(length: f64, area: f64, d: f64) -> f64 {
    length * d.cosh() / (area + length * d.sinh())
}
