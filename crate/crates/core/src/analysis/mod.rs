//! Diversity and performance metrics, selection-pressure extraction, and
//! replication aggregates.

mod diversity;
mod pressure;
mod record;

pub use diversity::{diversity, hamming, top_fraction};
pub use pressure::{node_attributes_csv, pressure_csv, selection_pressure_edges, PressureEdge};
pub use record::{
    aggregate, metrics_row, AggregateRecord, AggregateRow, DegreeSnapshot, MetricsRow, RunRecord, COLUMNS,
};
