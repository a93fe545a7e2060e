//! Experiment harness for `synchrotree`: seeded Monte Carlo trials over
//! random automata, summary statistics and CSV/JSON output.

pub mod config;
pub mod error;
pub mod experiments;
pub mod record;
pub mod stats;

pub use config::{ExperimentConfig, KRule};
pub use error::{LabError, Result};
pub use experiments::{run, EXPERIMENTS};
pub use record::{Cell, ExperimentRecord};
