//! Feature migration: seed a new initial population with cliques carried over
//! from the previous snapshot, then repair it with a few label-propagation
//! sweeps on the current graph.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cliques::CliqueSet;
use crate::encoding::{self, DisjointSet, LabelVector, LocusGenotype};
use crate::error::{Error, Result};
use crate::graph::Snapshot;

/// Label-propagation sweeps applied after clique genes are written.
pub const REPAIR_ITERATIONS: usize = 5;

/// Default transfer probability.
pub const DEFAULT_TP: f64 = 0.5;

/// For every clique node, the clique members it is still adjacent to.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CandidateMap {
    entries: Vec<(usize, Vec<usize>)>,
}

impl CandidateMap {
    pub fn get(&self, node: usize) -> Option<&[usize]> {
        self.entries
            .binary_search_by_key(&node, |(u, _)| *u)
            .ok()
            .map(|i| self.entries[i].1.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.entries.iter().map(|(u, c)| (*u, c.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn build_candidates(snapshot: &Snapshot, cliques: &CliqueSet) -> CandidateMap {
    let mut entries = Vec::with_capacity(cliques.node_count());
    for clique in &cliques.cliques {
        for &u in clique {
            let candidates = clique
                .iter()
                .copied()
                .filter(|&v| v != u && snapshot.has_edge(u, v))
                .collect();
            entries.push((u, candidates));
        }
    }
    entries.sort_by_key(|(u, _)| *u);
    CandidateMap { entries }
}

fn check_tp(tp: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&tp) {
        return Err(Error::InvalidParams(format!("transfer probability {tp} outside [0, 1]")));
    }
    Ok(())
}

/// Builds one initial solution.
///
/// Every node starts in its own community with a random unique label. Each
/// clique node, with probability `tp`, is linked to a random candidate, which
/// merges the transferred clique structure. The resulting labels are then
/// smoothed with `repair_iterations` synchronous label-propagation sweeps and
/// re-encoded.
pub fn migrate_individual<R: Rng + ?Sized>(
    snapshot: &Snapshot,
    candidates: &CandidateMap,
    tp: f64,
    repair_iterations: usize,
    rng: &mut R,
) -> LocusGenotype {
    let n = snapshot.node_count();
    let unique = encoding::random_unique_labels(n, rng);
    let mut seeded = LocusGenotype::identity(n);
    for (u, options) in candidates.iter() {
        let draw: f64 = rng.random();
        if draw <= tp {
            if let Some(&v) = options.choose(rng) {
                seeded.set_gene(u, v);
            }
        }
    }
    // Each merged group inherits the random label of its smallest member.
    let mut groups = DisjointSet::new(n);
    for u in 0..n {
        groups.union(u, seeded.gene(u));
    }
    let mut group_label = vec![usize::MAX; n];
    let labels: Vec<usize> = (0..n)
        .map(|u| {
            let root = groups.find(u);
            if group_label[root] == usize::MAX {
                group_label[root] = unique[u];
            }
            group_label[root]
        })
        .collect();
    let repaired = encoding::label_propagation(snapshot, &LabelVector::new(labels), repair_iterations);
    encoding::encode_labels(&repaired.labels, snapshot, rng)
}

/// Generates `population_size` initial solutions carrying the given cliques.
pub fn migrate_population<R: Rng + ?Sized>(
    snapshot: &Snapshot,
    cliques: &CliqueSet,
    tp: f64,
    population_size: usize,
    rng: &mut R,
) -> Result<Vec<LocusGenotype>> {
    check_tp(tp)?;
    if population_size == 0 {
        return Err(Error::InvalidParams("population size must be at least 1".into()));
    }
    let candidates = build_candidates(snapshot, cliques);
    Ok(populate(snapshot, &candidates, tp, REPAIR_ITERATIONS, population_size, rng))
}

/// Clique genes written without the label-propagation repair step.
pub fn naive_migrate_population<R: Rng + ?Sized>(
    snapshot: &Snapshot,
    cliques: &CliqueSet,
    tp: f64,
    population_size: usize,
    rng: &mut R,
) -> Result<Vec<LocusGenotype>> {
    check_tp(tp)?;
    let candidates = build_candidates(snapshot, cliques);
    Ok(populate(snapshot, &candidates, tp, 0, population_size, rng))
}

/// Plain label-propagation initialization (no transferred features).
pub fn label_propagation_population<R: Rng + ?Sized>(
    snapshot: &Snapshot,
    population_size: usize,
    rng: &mut R,
) -> Vec<LocusGenotype> {
    populate(snapshot, &CandidateMap::default(), 0.0, REPAIR_ITERATIONS, population_size, rng)
}

/// Individual `i` draws from stream `i` of a generator seeded once from
/// `rng`, so results do not depend on the thread count.
fn populate<R: Rng + ?Sized>(
    snapshot: &Snapshot,
    candidates: &CandidateMap,
    tp: f64,
    repair_iterations: usize,
    population_size: usize,
    rng: &mut R,
) -> Vec<LocusGenotype> {
    let stream_seed: u64 = rng.random();
    (0..population_size)
        .into_par_iter()
        .map(|i| {
            let mut local = ChaCha8Rng::seed_from_u64(stream_seed);
            local.set_stream(i as u64);
            migrate_individual(snapshot, candidates, tp, repair_iterations, &mut local)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Partition;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn k3_plus_tail() -> Snapshot {
        Snapshot::from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn candidates_follow_current_edges() {
        let s = k3_plus_tail();
        let cl = CliqueSet::new(vec![vec![0, 1, 2]], 0);
        let c = build_candidates(&s, &cl);
        assert_eq!(c.get(0), Some(&[1, 2][..]));
        assert_eq!(c.get(1), Some(&[0, 2][..]));
        assert_eq!(c.get(3), None);

        let broken = Snapshot::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let c = build_candidates(&broken, &cl);
        assert_eq!(c.get(0), Some(&[1][..]));
        assert_eq!(c.get(2), Some(&[1][..]));

        let isolated = Snapshot::from_edges(5, [(1, 2)]).unwrap();
        let c = build_candidates(&isolated, &cl);
        assert_eq!(c.get(0), Some(&[][..]));
    }

    #[test]
    fn full_transfer_keeps_clique_together_before_repair() {
        let s = k3_plus_tail();
        let cl = CliqueSet::new(vec![vec![0, 1, 2]], 0);
        let candidates = build_candidates(&s, &cl);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = migrate_individual(&s, &candidates, 1.0, 0, &mut rng);
            let p: Partition = g.components();
            assert_eq!(p.label(0), p.label(1));
            assert_eq!(p.label(1), p.label(2));
        }
    }

    #[test]
    fn empty_cliques_match_label_propagation_init() {
        let s = k3_plus_tail();
        let a = migrate_population(&s, &CliqueSet::default(), 0.5, 10, &mut ChaCha8Rng::seed_from_u64(9))
            .unwrap();
        let b = label_propagation_population(&s, 10, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_parameters() {
        let s = k3_plus_tail();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(migrate_population(&s, &CliqueSet::default(), 1.5, 1, &mut rng).is_err());
        assert!(migrate_population(&s, &CliqueSet::default(), 0.5, 0, &mut rng).is_err());
    }
}
