use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::encoding::LocusGenotype;
use crate::error::{Error, Result};
use crate::graph::Snapshot;

/// Unnormalized selection weight of each individual: `1 / rank`.
pub fn selection_weights(ranks: &[usize]) -> Vec<f64> {
    ranks.iter().map(|&r| 1.0 / r as f64).collect()
}

/// Weighted draws with probability proportional to inverse Pareto rank.
#[derive(Debug, Clone)]
pub struct RankSelector {
    index: WeightedIndex<f64>,
}

impl RankSelector {
    pub fn new(ranks: &[usize]) -> Result<Self> {
        if ranks.is_empty() || ranks.contains(&0) {
            return Err(Error::InvalidParams("selection needs ranks >= 1 for a non-empty population".into()));
        }
        let index = WeightedIndex::new(selection_weights(ranks))
            .map_err(|e| Error::InvalidParams(e.to_string()))?;
        Ok(Self { index })
    }

    pub fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.index.sample(rng)
    }

    /// Two independent draws, with replacement.
    pub fn pick_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (usize, usize) {
        (self.pick(rng), self.pick(rng))
    }
}

/// Indices of two parents drawn with weights `1 / rank`.
pub fn select_pair<R: Rng + ?Sized>(ranks: &[usize], rng: &mut R) -> Result<(usize, usize)> {
    Ok(RankSelector::new(ranks)?.pick_pair(rng))
}

/// Where `mask[i]` is true the first child inherits from the first parent and
/// the second child from the second; elsewhere the genes are swapped.
pub fn crossover_with_mask(
    parent1: &LocusGenotype,
    parent2: &LocusGenotype,
    mask: &[bool],
) -> Result<(LocusGenotype, LocusGenotype)> {
    if parent1.len() != parent2.len() || parent1.len() != mask.len() {
        return Err(Error::LengthMismatch {
            left: parent1.len(),
            right: if parent1.len() != parent2.len() {
                parent2.len()
            } else {
                mask.len()
            },
        });
    }
    let (mut c1, mut c2) = (Vec::with_capacity(mask.len()), Vec::with_capacity(mask.len()));
    for (i, &keep) in mask.iter().enumerate() {
        let (a, b) = (parent1.gene(i), parent2.gene(i));
        if keep {
            c1.push(a);
            c2.push(b);
        } else {
            c1.push(b);
            c2.push(a);
        }
    }
    Ok((
        LocusGenotype::from_genes_unchecked(c1),
        LocusGenotype::from_genes_unchecked(c2),
    ))
}

/// Uniform crossover whose mask bits are 1 with probability `cp`.
pub fn uniform_crossover<R: Rng + ?Sized>(
    parent1: &LocusGenotype,
    parent2: &LocusGenotype,
    cp: f64,
    rng: &mut R,
) -> Result<(LocusGenotype, LocusGenotype)> {
    if parent1.len() != parent2.len() {
        return Err(Error::LengthMismatch {
            left: parent1.len(),
            right: parent2.len(),
        });
    }
    let mask: Vec<bool> = (0..parent1.len()).map(|_| rng.random_bool(cp)).collect();
    crossover_with_mask(parent1, parent2, &mask)
}

/// Each gene, with probability `mp`, is redirected to a uniformly chosen
/// neighbor. Isolated nodes keep pointing at themselves.
pub fn mutate<R: Rng + ?Sized>(
    genotype: &mut LocusGenotype,
    mp: f64,
    snapshot: &Snapshot,
    rng: &mut R,
) {
    for u in 0..genotype.len() {
        if rng.random_bool(mp) {
            if let Some(&v) = snapshot.neighbors(u).choose(rng) {
                genotype.set_gene(u, v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(genes: &[usize]) -> LocusGenotype {
        LocusGenotype::from_genes_unchecked(genes.to_vec())
    }

    #[test]
    fn weights_from_ranks() {
        let w = selection_weights(&[1, 3, 2, 1, 2, 4, 5]);
        assert_eq!(w, vec![1.0, 1.0 / 3.0, 0.5, 1.0, 0.5, 0.25, 0.2]);
    }

    #[test]
    fn single_individual_selected_twice() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(select_pair(&[1], &mut rng).unwrap(), (0, 0));
        assert!(select_pair(&[], &mut rng).is_err());
    }

    #[test]
    fn crossover_reference_example() {
        let p1 = g(&[3, 5, 1, 1, 3, 4, 6]);
        let p2 = g(&[1, 3, 2, 6, 2, 4, 5]);
        let mask = [false, true, true, true, false, false, true];
        let (c1, c2) = crossover_with_mask(&p1, &p2, &mask).unwrap();
        assert_eq!(c1.genes(), &[1, 5, 1, 1, 2, 4, 6]);
        assert_eq!(c2.genes(), &[3, 3, 2, 6, 3, 4, 5]);
    }

    #[test]
    fn crossover_degenerate_masks() {
        let p1 = g(&[0, 2, 1]);
        let p2 = g(&[1, 0, 2]);
        let (c1, c2) = crossover_with_mask(&p1, &p2, &[true; 3]).unwrap();
        assert_eq!((c1, c2), (p1.clone(), p2.clone()));
        let (c1, c2) = crossover_with_mask(&p1, &p1, &[false, true, false]).unwrap();
        assert_eq!((c1, c2), (p1.clone(), p1.clone()));
        assert!(crossover_with_mask(&p1, &g(&[0]), &[true]).is_err());
    }

    #[test]
    fn mutation_rates() {
        let s = Snapshot::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut genotype = LocusGenotype::identity(4);
        mutate(&mut genotype, 0.0, &s, &mut rng);
        assert_eq!(genotype, LocusGenotype::identity(4));
        mutate(&mut genotype, 1.0, &s, &mut rng);
        for u in 0..3 {
            assert!(s.neighbors(u).contains(&genotype.gene(u)));
        }
        assert_eq!(genotype.gene(3), 3);
    }
}
