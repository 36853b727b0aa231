use std::collections::HashSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::operators::{mutate, uniform_crossover, RankSelector};
use super::sorting::{crowding_distance, nondominated_sort};
use super::{GaParams, Individual, ObjectiveVector, Objectives};
use crate::encoding::LocusGenotype;
use crate::error::{Error, Result};
use crate::graph::Snapshot;

/// Summary of the population after one generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    /// Best (minimum) value of each objective over the population.
    pub best: Vec<f64>,
    pub front_size: usize,
}

impl GenerationStats {
    fn of(generation: usize, population: &[Individual]) -> Self {
        let arity = population.first().map_or(0, |i| i.objectives.len());
        let best = (0..arity)
            .map(|m| {
                population
                    .iter()
                    .map(|i| i.objectives.0[m])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        Self {
            generation,
            best,
            front_size: population.iter().filter(|i| i.rank == 1).count(),
        }
    }
}

/// Result of one evolutionary run.
#[derive(Debug, Clone)]
pub struct Evolution {
    /// Rank-1 individuals of the final population, one per distinct partition.
    pub front: Vec<Individual>,
    pub population: Vec<Individual>,
    pub trace: Vec<GenerationStats>,
}

impl Evolution {
    /// Trace as CSV: generation, one best column per objective, front size.
    pub fn trace_csv(&self) -> String {
        let arity = self.trace.first().map_or(0, |s| s.best.len());
        let mut out = String::from("generation");
        for m in 0..arity {
            let _ = write!(out, ",best_f{m}");
        }
        out.push_str(",front_size\n");
        for s in &self.trace {
            let _ = write!(out, "{}", s.generation);
            for v in &s.best {
                let _ = write!(out, ",{v}");
            }
            let _ = writeln!(out, ",{}", s.front_size);
        }
        out
    }
}

fn evaluate_all<O: Objectives + ?Sized>(genotypes: Vec<LocusGenotype>, objectives: &O) -> Result<Vec<Individual>> {
    genotypes
        .into_par_iter()
        .map(|g| Individual::evaluate(g, objectives))
        .collect()
}

/// Assigns rank and crowding to every member, returning the fronts.
fn rank_population(population: &mut [Individual], params: &GaParams) -> Vec<Vec<usize>> {
    let objectives: Vec<ObjectiveVector> = population.iter().map(|i| i.objectives.clone()).collect();
    let ranks = nondominated_sort(&objectives);
    let max_rank = ranks.iter().copied().max().unwrap_or(0);
    let mut fronts = vec![Vec::new(); max_rank];
    for (i, &r) in ranks.iter().enumerate() {
        population[i].rank = r;
        fronts[r - 1].push(i);
    }
    for front in &fronts {
        let members: Vec<&ObjectiveVector> = front.iter().map(|&i| &objectives[i]).collect();
        let distance = crowding_distance(&members, params.density_estimator);
        for (&i, d) in front.iter().zip(distance) {
            population[i].crowding = d;
        }
    }
    fronts
}

/// Elitist truncation: whole fronts in rank order, the last partial front by
/// decreasing crowding distance.
fn survive(mut pool: Vec<Individual>, size: usize, params: &GaParams) -> Vec<Individual> {
    let fronts = rank_population(&mut pool, params);
    let mut keep = Vec::with_capacity(size);
    for mut front in fronts {
        if keep.len() + front.len() <= size {
            keep.extend(front);
            continue;
        }
        front.sort_by(|&a, &b| pool[b].crowding.total_cmp(&pool[a].crowding).then(a.cmp(&b)));
        keep.extend(front.into_iter().take(size - keep.len()));
        break;
    }
    keep.sort_unstable();
    let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
    keep.into_iter().filter_map(|i| slots[i].take()).collect()
}

fn offspring_pair(
    population: &[Individual],
    selector: &RankSelector,
    snapshot: &Snapshot,
    params: &GaParams,
    rng: &mut ChaCha8Rng,
) -> Result<[LocusGenotype; 2]> {
    let (a, b) = selector.pick_pair(rng);
    let (mut c1, mut c2) = uniform_crossover(
        &population[a].genotype,
        &population[b].genotype,
        params.crossover_probability,
        rng,
    )?;
    mutate(&mut c1, params.mutation_probability, snapshot, rng);
    mutate(&mut c2, params.mutation_probability, snapshot, rng);
    Ok([c1, c2])
}

/// Runs NSGA-II from `initial` and returns the final nondominated set.
///
/// Each generation creates `population_size` offspring by selection,
/// crossover and mutation, pools them with the parents, and truncates back.
/// Offspring pairs draw from independent random streams derived from `rng`,
/// so results do not depend on the number of worker threads.
pub fn evolve<O, R>(
    snapshot: &Snapshot,
    initial: Vec<LocusGenotype>,
    objectives: &O,
    params: &GaParams,
    rng: &mut R,
) -> Result<Evolution>
where
    O: Objectives + ?Sized,
    R: Rng + ?Sized,
{
    params.validate()?;
    if initial.len() != params.population_size {
        return Err(Error::InvalidParams(format!(
            "initial population has {} members, expected {}",
            initial.len(),
            params.population_size
        )));
    }
    for g in &initial {
        g.validate(snapshot)?;
    }
    let size = params.population_size;
    let mut population = evaluate_all(initial, objectives)?;
    rank_population(&mut population, params);
    let mut trace = vec![GenerationStats::of(0, &population)];

    for generation in 1..=params.generations {
        let ranks: Vec<usize> = population.iter().map(|i| i.rank).collect();
        let selector = RankSelector::new(&ranks)?;
        let stream_seed: u64 = rng.random();
        let pairs = size.div_ceil(2);
        let children: Vec<[LocusGenotype; 2]> = (0..pairs)
            .into_par_iter()
            .map(|slot| {
                let mut local = ChaCha8Rng::seed_from_u64(stream_seed);
                local.set_stream(slot as u64);
                offspring_pair(&population, &selector, snapshot, params, &mut local)
            })
            .collect::<Result<_>>()?;
        let offspring: Vec<LocusGenotype> = children.into_iter().flatten().take(size).collect();
        let mut pool = population;
        pool.extend(evaluate_all(offspring, objectives)?);
        population = survive(pool, size, params);
        trace.push(GenerationStats::of(generation, &population));
    }

    let mut seen = HashSet::new();
    let front = population
        .iter()
        .filter(|i| i.rank == 1 && seen.insert(i.partition.labels().to_vec()))
        .cloned()
        .collect();
    Ok(Evolution {
        front,
        population,
        trace,
    })
}
