//! Generational dynamics of the three EA designs.
//!
//! A generation has two phases. First `M` parents, drawn with replacement
//! from the individuals alive at the start of the generation, each produce
//! one mutated clone; structured variants also apply their reproduction
//! rule to the graph. Then competitions are staged until `M` individuals
//! have died, returning the population to size `M`.

mod config;
mod run;
mod state;

pub use config::{EaConfig, FitnessMode, Variant};
pub use run::{run, run_on};
pub use state::{EaState, Individual, TraceEvent};
