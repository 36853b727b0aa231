//! End-to-end dynamic detection: label-propagation start, then per snapshot
//! clique extraction from the previous solution, migration into a fresh
//! population, two-objective evolution and final-solution selection.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cliques::extract_all;
use crate::encoding::{self, LocusGenotype};
use crate::error::{Error, Result};
use crate::graph::{DynamicNetwork, Partition, Snapshot};
use crate::metrics;
use crate::moea::{evolve, GaParams, GenerationStats, ObjectiveVector, Objectives, QualityMeasure};
use crate::transfer;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub fn quality(measure: QualityMeasure, snapshot: &Snapshot, partition: &Partition) -> Result<f64> {
    match measure {
        QualityMeasure::Modularity => metrics::modularity(snapshot, partition),
        QualityMeasure::CommunityScore => metrics::community_score(snapshot, partition),
    }
}

/// Negated snapshot quality and, when a previous solution exists, negated
/// NMI to it.
pub struct SnapshotObjectives<'a> {
    pub snapshot: &'a Snapshot,
    pub cost: QualityMeasure,
    pub previous: Option<&'a Partition>,
}

impl Objectives for SnapshotObjectives<'_> {
    fn arity(&self) -> usize {
        1 + usize::from(self.previous.is_some())
    }

    fn evaluate(&self, partition: &Partition) -> Result<ObjectiveVector> {
        let mut values = vec![-quality(self.cost, self.snapshot, partition)?];
        if let Some(prev) = self.previous {
            values.push(-metrics::nmi(partition, prev)?);
        }
        Ok(ObjectiveVector::new(values))
    }
}

/// Index of the front member maximizing `criterion`. Ties go to higher
/// modularity, then fewer communities, then the lexicographically smaller
/// label vector.
pub fn select_final(front: &[&Partition], snapshot: &Snapshot, criterion: QualityMeasure) -> Result<usize> {
    if front.is_empty() {
        return Err(Error::InvalidParams("empty Pareto front".into()));
    }
    let keys = front
        .iter()
        .map(|p| {
            Ok(SelectionKey {
                score: quality(criterion, snapshot, p)?,
                modularity: metrics::modularity(snapshot, p)?,
                communities: p.community_count(),
                labels: p.labels(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(best_key(&keys))
}

#[derive(Debug, Clone)]
pub(crate) struct SelectionKey<'a> {
    pub score: f64,
    pub modularity: f64,
    pub communities: usize,
    pub labels: &'a [usize],
}

pub(crate) fn best_key(keys: &[SelectionKey]) -> usize {
    let better = |a: &SelectionKey, b: &SelectionKey| {
        a.score
            .total_cmp(&b.score)
            .then(a.modularity.total_cmp(&b.modularity))
            .then(b.communities.cmp(&a.communities))
            .then(b.labels.cmp(a.labels))
    };
    let mut best = 0;
    for i in 1..keys.len() {
        if better(&keys[i], &keys[best]) == Ordering::Greater {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontEntry {
    pub objectives: Vec<f64>,
    pub modularity: f64,
    pub community_score: f64,
    pub communities: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotReport {
    /// 1-based snapshot index.
    pub time: usize,
    /// Chosen partition as canonical labels over registry indices.
    pub labels: Vec<usize>,
    pub communities: usize,
    pub modularity: f64,
    pub community_score: f64,
    pub nmi_previous: Option<f64>,
    pub nmi_truth: Option<f64>,
    pub cliques: usize,
    pub seconds: f64,
    pub transfer_seconds: f64,
    /// Index of the chosen solution in `front`.
    pub chosen: usize,
    pub front: Vec<FrontEntry>,
    pub trace: Vec<GenerationStats>,
}

impl SnapshotReport {
    pub fn partition(&self) -> Partition {
        Partition::from_index_labels(&self.labels)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub params: GaParams,
    pub seed: u64,
    pub total_seconds: f64,
    pub snapshots: Vec<SnapshotReport>,
}

impl RunReport {
    pub fn partitions(&self) -> Vec<Partition> {
        self.snapshots.iter().map(SnapshotReport::partition).collect()
    }

    pub fn mean_nmi_truth(&self) -> Option<f64> {
        let values: Option<Vec<f64>> = self.snapshots.iter().map(|s| s.nmi_truth).collect();
        values.map(|v| v.iter().sum::<f64>() / v.len().max(1) as f64)
    }

    pub fn transfer_seconds(&self) -> f64 {
        self.snapshots.iter().map(|s| s.transfer_seconds).sum()
    }

    /// Copy with all wall-clock fields zeroed, for reproducibility checks.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        r.total_seconds = 0.0;
        for s in &mut r.snapshots {
            s.seconds = 0.0;
            s.transfer_seconds = 0.0;
        }
        r
    }

    /// Per-snapshot metrics as CSV.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from(
            "time,communities,modularity,community_score,nmi_previous,nmi_truth,cliques,seconds,transfer_seconds\n",
        );
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for s in &self.snapshots {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                s.time,
                s.communities,
                s.modularity,
                s.community_score,
                opt(s.nmi_previous),
                opt(s.nmi_truth),
                s.cliques,
                s.seconds,
                s.transfer_seconds
            );
        }
        out
    }

    /// Every Pareto front as CSV; `partition_file` names the chosen
    /// solution's file for the row that was selected.
    pub fn fronts_csv(&self, partition_file: impl Fn(usize) -> String) -> String {
        let mut out = String::from("time,index,snapshot_cost,temporal_cost,modularity,community_score,communities,chosen,partition_file\n");
        for s in &self.snapshots {
            for (i, e) in s.front.iter().enumerate() {
                let temporal = e.objectives.get(1).map(|v| v.to_string()).unwrap_or_default();
                let chosen = i == s.chosen;
                let file = if chosen { partition_file(s.time) } else { String::new() };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    s.time, i, e.objectives[0], temporal, e.modularity, e.community_score, e.communities, chosen, file
                );
            }
        }
        out
    }
}

fn check_truth(network: &DynamicNetwork, truth: Option<&[Partition]>) -> Result<()> {
    if let Some(truth) = truth {
        if truth.len() < network.len() {
            return Err(Error::MissingTruth(truth.len() + 1));
        }
        for (t, p) in truth.iter().enumerate().take(network.len()) {
            if p.node_count() != network.node_count() {
                return Err(Error::NodeUniverse(format!(
                    "truth {} covers {} nodes, network has {}",
                    t + 1,
                    p.node_count(),
                    network.node_count()
                )));
            }
        }
    }
    Ok(())
}

/// Runs detection over every snapshot of `network`.
pub fn run_tmoga(network: &DynamicNetwork, params: &GaParams, truth: Option<&[Partition]>) -> Result<RunReport> {
    run(network, params, truth, true)
}

/// The same detection with plain label-propagation initialization at every
/// snapshot and no feature transfer. Random streams line up with
/// [`run_tmoga`], so the two differ only in how later populations start.
pub fn run_label_propagation_only(
    network: &DynamicNetwork,
    params: &GaParams,
    truth: Option<&[Partition]>,
) -> Result<RunReport> {
    run(network, params, truth, false)
}

fn run(network: &DynamicNetwork, params: &GaParams, truth: Option<&[Partition]>, transfer: bool) -> Result<RunReport> {
    params.validate()?;
    if network.is_empty() {
        return Err(Error::NoSnapshots);
    }
    check_truth(network, truth)?;
    let run_start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut reports: Vec<SnapshotReport> = Vec::with_capacity(network.len());
    let mut previous: Option<Partition> = None;

    for t in 0..network.len() {
        let snapshot = network.snapshot(t);
        let start = Instant::now();
        let (initial, cliques, transfer_seconds) = match previous.as_ref().filter(|_| transfer) {
            None => (
                transfer::label_propagation_population(snapshot, params.population_size, &mut rng),
                0,
                0.0,
            ),
            Some(prev) => {
                let transfer_start = Instant::now();
                let cliques = extract_all(network.snapshot(t - 1), prev, params.cid_threshold, params.max_depth);
                let initial = transfer::migrate_population(
                    snapshot,
                    &cliques,
                    params.transfer_probability,
                    params.population_size,
                    &mut rng,
                )?;
                (initial, cliques.len(), transfer_start.elapsed().as_secs_f64())
            }
        };
        let objectives = SnapshotObjectives {
            snapshot,
            cost: params.snapshot_cost,
            previous: previous.as_ref(),
        };
        let evolution = evolve(snapshot, initial, &objectives, params, &mut rng)?;
        let front: Vec<&Partition> = evolution.front.iter().map(|i| &i.partition).collect();
        let chosen = select_final(&front, snapshot, params.pareto_selector)?;
        let partition = evolution.front[chosen].partition.clone();
        let entries = evolution
            .front
            .iter()
            .map(|i| {
                Ok(FrontEntry {
                    objectives: i.objectives.0.clone(),
                    modularity: metrics::modularity(snapshot, &i.partition)?,
                    community_score: metrics::community_score(snapshot, &i.partition)?,
                    communities: i.partition.community_count(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let nmi_previous = previous.as_ref().map(|p| metrics::nmi(&partition, p)).transpose()?;
        let nmi_truth = truth.map(|tr| metrics::nmi(&partition, &tr[t])).transpose()?;
        reports.push(SnapshotReport {
            time: t + 1,
            labels: partition.labels().to_vec(),
            communities: partition.community_count(),
            modularity: metrics::modularity(snapshot, &partition)?,
            community_score: metrics::community_score(snapshot, &partition)?,
            nmi_previous,
            nmi_truth,
            cliques,
            seconds: start.elapsed().as_secs_f64(),
            transfer_seconds,
            chosen,
            front: entries,
            trace: evolution.trace,
        });
        previous = Some(partition);
    }

    Ok(RunReport {
        schema_version: REPORT_SCHEMA_VERSION,
        params: params.clone(),
        seed: params.seed,
        total_seconds: run_start.elapsed().as_secs_f64(),
        snapshots: reports,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitStrategy {
    Random,
    LabelPropagation,
    NaiveTransfer,
    FeatureTransfer,
}

impl InitStrategy {
    pub const ALL: [InitStrategy; 4] = [
        InitStrategy::Random,
        InitStrategy::LabelPropagation,
        InitStrategy::NaiveTransfer,
        InitStrategy::FeatureTransfer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InitStrategy::Random => "random",
            InitStrategy::LabelPropagation => "label-prop",
            InitStrategy::NaiveTransfer => "naive-transfer",
            InitStrategy::FeatureTransfer => "feature-transfer",
        }
    }
}

/// Solutions generated per strategy and snapshot.
pub const INIT_POPULATION: usize = 200;
/// Number of best solutions averaged.
pub const INIT_TOP: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitComparison {
    pub strategies: Vec<InitStrategy>,
    /// `scores[t][s]`: mean NMI-to-truth of the best solutions of strategy
    /// `s` at snapshot `t`.
    pub scores: Vec<Vec<f64>>,
}

impl InitComparison {
    pub fn column(&self, strategy: InitStrategy) -> Option<Vec<f64>> {
        let s = self.strategies.iter().position(|&x| x == strategy)?;
        Some(self.scores.iter().map(|row| row[s]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("time");
        for s in &self.strategies {
            let _ = write!(out, ",{}", s.name());
        }
        out.push('\n');
        for (t, row) in self.scores.iter().enumerate() {
            let _ = write!(out, "{}", t + 1);
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

fn top_mean(truth: &Partition, population: &[LocusGenotype], top: usize) -> Result<f64> {
    let mut scores: Vec<f64> = population
        .par_iter()
        .map(|g| metrics::nmi(&g.components(), truth))
        .collect::<Result<_>>()?;
    scores.sort_by(|a, b| b.total_cmp(a));
    let k = top.min(scores.len()).max(1);
    Ok(scores[..k].iter().sum::<f64>() / k as f64)
}

/// Scores initialization strategies against ground truth. Transfer
/// strategies carry cliques extracted from the previous snapshot's truth.
/// Label propagation and feature transfer share a random stream per
/// snapshot, so they coincide when no cliques are available.
pub fn compare_initializations(
    network: &DynamicNetwork,
    truth: &[Partition],
    params: &GaParams,
    seed: u64,
) -> Result<InitComparison> {
    params.validate()?;
    check_truth(network, Some(truth))?;
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut scores = Vec::with_capacity(network.len());
    for t in 0..network.len() {
        let snapshot = network.snapshot(t);
        let shared: u64 = master.random();
        let mut own = ChaCha8Rng::seed_from_u64(master.random());
        let cliques = if t == 0 {
            Default::default()
        } else {
            extract_all(network.snapshot(t - 1), &truth[t - 1], params.cid_threshold, params.max_depth)
        };
        let mut row = Vec::with_capacity(InitStrategy::ALL.len());
        for strategy in InitStrategy::ALL {
            let mut rng = ChaCha8Rng::seed_from_u64(shared);
            let population = match strategy {
                InitStrategy::Random => (0..INIT_POPULATION)
                    .map(|_| encoding::random_genotype(snapshot, &mut own))
                    .collect(),
                InitStrategy::LabelPropagation => {
                    transfer::label_propagation_population(snapshot, INIT_POPULATION, &mut rng)
                }
                InitStrategy::NaiveTransfer => transfer::naive_migrate_population(
                    snapshot,
                    &cliques,
                    params.transfer_probability,
                    INIT_POPULATION,
                    &mut rng,
                )?,
                InitStrategy::FeatureTransfer => transfer::migrate_population(
                    snapshot,
                    &cliques,
                    params.transfer_probability,
                    INIT_POPULATION,
                    &mut rng,
                )?,
            };
            row.push(top_mean(&truth[t], &population, INIT_TOP)?);
        }
        scores.push(row);
    }
    Ok(InitComparison {
        strategies: InitStrategy::ALL.to_vec(),
        scores,
    })
}
