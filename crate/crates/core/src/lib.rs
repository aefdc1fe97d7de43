//! Power allocation over time for a train crossing one base-station cell.
//!
//! The link budget changes deterministically as the train moves, so the
//! transmitter can plan its power over the whole traversal. This crate
//! implements constant power, channel inversion, water-filling and two
//! proportional-fair allocations (closed-form and searched multiplier), plus
//! the metrics and CSV tooling used to compare them.

pub mod allocators;
pub mod analysis;
pub mod channel;
pub mod cli;
pub mod error;
pub mod numerics;

pub use allocators::{PowerProfile, Scheme, SolveReport, SolverSettings};
pub use channel::{Deployment, Scenario};
pub use error::{Error, Result};
