//! The identity lab: both sides of every identity and inequality, evaluated
//! on catalog surfaces and collected into reports.

pub mod algebraic;
pub mod catalog;
pub mod integral;
pub mod report;
pub mod rigidity;
pub mod suite;
pub mod weights;

pub use catalog::{builtin_norm, named_scenarios, scenario, Scenario, SurfaceSpec};
pub use report::{CheckReport, Criterion, LadderRow, TolerancePolicy, Verdict};
pub use weights::{Monotonicity, WeightFunction};
