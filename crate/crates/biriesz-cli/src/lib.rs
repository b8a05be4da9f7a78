//! Named experiments over the `biriesz` library and the pieces of the
//! command-line front end.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{ExperimentConfig, Params};
pub use experiments::{find, run, REGISTRY};
pub use report::{Check, ExperimentReport, Figure, Table};
