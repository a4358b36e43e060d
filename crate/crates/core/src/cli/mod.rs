pub mod adversary;
pub mod build;
pub mod config;
pub mod output;
pub mod run;

pub use adversary::{adversary, Adversary, AdversaryKind, AdversarySpec};
pub use config::{ConfigError, ExperimentConfig, Source};
pub use output::Summary;
pub use run::{run_source, Overrides, RunOutcome};
