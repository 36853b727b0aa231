//! NSGA-II specialised to locus-encoded community detection: Pareto ranking,
//! crowding, inverse-rank weighted selection, masked uniform crossover,
//! neighbor mutation and elitist survival.

mod evolve;
mod operators;
mod sorting;

use serde::{Deserialize, Serialize};

use crate::encoding::LocusGenotype;
use crate::error::{Error, Result};
use crate::graph::Partition;

pub use evolve::{evolve, Evolution, GenerationStats};
pub use operators::{crossover_with_mask, mutate, select_pair, selection_weights, uniform_crossover, RankSelector};
pub use sorting::{crowding_distance, dominates, nondominated_sort};

/// Objective values, all minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector(pub Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Objective functions evaluated on decoded partitions.
pub trait Objectives: Sync {
    fn arity(&self) -> usize;
    fn evaluate(&self, partition: &Partition) -> Result<ObjectiveVector>;
}

/// A genotype with its decoded partition and cached objectives.
#[derive(Debug, Clone)]
pub struct Individual {
    pub genotype: LocusGenotype,
    pub partition: Partition,
    pub objectives: ObjectiveVector,
    /// Pareto rank, 1 for the nondominated front.
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    pub fn evaluate<O: Objectives + ?Sized>(genotype: LocusGenotype, objectives: &O) -> Result<Self> {
        let partition = genotype.components();
        let values = objectives.evaluate(&partition)?;
        Ok(Self {
            genotype,
            partition,
            objectives: values,
            rank: 0,
            crowding: 0.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityEstimator {
    #[default]
    Standard,
    /// Shift-based density estimation: neighbors are shifted to be no better
    /// than the member under evaluation before distances are taken.
    ShiftBased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QualityMeasure {
    #[default]
    Modularity,
    CommunityScore,
}

/// Search parameters. Defaults are the reference configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaParams {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_probability: f64,
    pub mutation_probability: f64,
    pub cid_threshold: f64,
    pub max_depth: usize,
    pub transfer_probability: f64,
    pub seed: u64,
    pub density_estimator: DensityEstimator,
    /// Quality measure optimized as the snapshot cost.
    pub snapshot_cost: QualityMeasure,
    /// Measure used to pick the final solution from the Pareto front.
    pub pareto_selector: QualityMeasure,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 200,
            generations: 100,
            crossover_probability: 0.8,
            mutation_probability: 0.2,
            cid_threshold: 0.8,
            max_depth: 5,
            transfer_probability: 0.5,
            seed: 1,
            density_estimator: DensityEstimator::Standard,
            snapshot_cost: QualityMeasure::Modularity,
            pareto_selector: QualityMeasure::CommunityScore,
        }
    }
}

impl GaParams {
    /// Community Score as the snapshot cost, modularity to pick the final
    /// solution.
    pub fn tmoga2(self) -> Self {
        Self {
            snapshot_cost: QualityMeasure::CommunityScore,
            pareto_selector: QualityMeasure::Modularity,
            ..self
        }
    }

    pub fn shift_based(self) -> Self {
        Self {
            density_estimator: DensityEstimator::ShiftBased,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let probabilities = [
            ("crossover probability", self.crossover_probability),
            ("mutation probability", self.mutation_probability),
            ("transfer probability", self.transfer_probability),
            ("CID threshold", self.cid_threshold),
        ];
        for (name, p) in probabilities {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("{name} {p} outside [0, 1]")));
            }
        }
        if self.population_size == 0 {
            return Err(Error::InvalidParams("population size must be at least 1".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::InvalidParams("max depth must be at least 1".into()));
        }
        Ok(())
    }
}
