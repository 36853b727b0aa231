//! Dynamic community detection with a transfer-learning multi-objective
//! genetic algorithm, plus benchmark generators and information-theoretic
//! checks.

pub mod benchgen;
pub mod cliques;
pub mod encoding;
pub mod error;
pub mod graph;
pub mod infotheory;
pub mod metrics;
pub mod moea;
pub mod pipeline;
pub mod transfer;

pub use cliques::CliqueSet;
pub use encoding::{LabelVector, LocusGenotype};
pub use error::{Error, Result};
pub use graph::{DynamicNetwork, NodeRegistry, Partition, Snapshot};
pub use moea::{DensityEstimator, GaParams, Individual, ObjectiveVector, QualityMeasure};
pub use pipeline::{run_tmoga, RunReport, SnapshotReport};
