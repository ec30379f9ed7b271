//! Experiment orchestration for the `sotea` simulator: spec files, bundled
//! presets, replicated sweeps, topology tables, network snapshots and the
//! oracle self-check.

pub mod error;
pub mod netstats;
pub mod orchestrate;
pub mod presets;
pub mod snapshot;
pub mod spec;
pub mod verify;

pub use error::{HarnessError, Result};
pub use spec::{ExperimentSpec, RunPlan, SweepPoint};

/// Version of the CSV layouts written by this crate.
pub const CSV_SCHEMA_VERSION: u32 = 1;
