//! Two-stock minority game in which each agent's expected return for one
//! stock mixes both stocks' lagged returns.
//!
//! The crate covers the simulation itself ([`engine`]), its building blocks
//! ([`strategy`], [`expectation`], [`market`], [`scoring`]), the statistics
//! used to read results ([`stats`]), parameter-grid experiments
//! ([`sweep`]), the sign-case analysis of expected-return changes
//! ([`analytic`]), and CSV import/export ([`export`]).

pub mod analytic;
pub mod config;
pub mod engine;
pub mod error;
pub mod expectation;
pub mod export;
pub mod market;
pub mod scoring;
pub mod seed;
pub mod stats;
pub mod strategy;
pub mod sweep;
pub mod types;

pub use config::{CouplingSpec, EventModel, ModelConfig};
pub use engine::{run, run_many, Pairing, RunBatch, RunResult};
pub use sweep::{Axis, Experiment, SweepGrid, SweepOptions};
pub use error::{Error, Result};
pub use types::{Decision, DecisionSet, SignBit, Stock};
