//! Evolutionary algorithms whose populations live on self-organizing
//! interaction networks.
//!
//! Three designs share one generational loop:
//!
//! * **Panmictic**: every individual may meet every other one; competition
//!   is a binary tournament.
//! * **Cellular**: individuals sit on a ring that stays a ring.
//! * **SOTEA**: the ring is only the starting point. Reproduction copies a
//!   fraction of the parent's links to the offspring and competition hands
//!   the loser's links to the winner, so the topology evolves with the
//!   population.
//!
//! Fitness is either the raw NK objective or the *epistatic* fitness, a rank
//! of the objective inside the individual's neighborhood.
//!
//! ```
//! use sotea_core::engine::{EaConfig, FitnessMode, Variant};
//!
//! let mut config = EaConfig::new(Variant::Sotea, FitnessMode::Epistatic, 20, 12, 3);
//! config.generations = 5;
//! let record = sotea_core::engine::run(&config).unwrap();
//! assert_eq!(record.rows.len(), 6);
//! ```

pub mod analysis;
pub mod engine;
pub mod error;
pub mod genome;
pub mod network;
pub mod nk;
pub mod rng;

pub use error::{Error, Result};
pub use genome::Genome;
pub use network::{NodeId, PopulationGraph};
pub use nk::NkLandscape;
