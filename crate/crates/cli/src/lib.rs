pub mod config;
pub mod experiments;
pub mod measure;
pub mod output;

pub use config::{ExampleKind, ExperimentConfig, Parameters};
pub use experiments::{run, SweepRow, DOMINANCE_TOL};
