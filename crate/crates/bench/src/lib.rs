//! Shared inputs for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tmoga_core::benchgen::{self, GroundTruthSequence};
use tmoga_core::encoding::{self, LocusGenotype};
use tmoga_core::{ObjectiveVector, Snapshot};

pub fn synfix() -> GroundTruthSequence {
    benchgen::gen_synfix(3, 1).expect("fixed parameters are feasible")
}

pub fn random_population(snapshot: &Snapshot, size: usize, seed: u64) -> Vec<LocusGenotype> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size).map(|_| encoding::random_genotype(snapshot, &mut rng)).collect()
}

/// Points on a few crossing lines, so fronts have realistic depth.
pub fn objective_cloud(size: usize) -> Vec<ObjectiveVector> {
    (0..size)
        .map(|i| {
            let x = (i * 7919 % size) as f64 / size as f64;
            let band = (i % 9) as f64 * 0.05;
            ObjectiveVector::new(vec![x + band, 1.0 - x + band])
        })
        .collect()
}
