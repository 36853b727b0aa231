//! Ground-truthed dynamic network generators.
//!
//! `gen_synfix` and `gen_synvar` follow the classic Girvan-Newman style
//! construction (expected degree 16, `z` expected inter-community edges per
//! node). `gen_events` is a planted-partition generator with community
//! evolution events layered on top.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DynamicNetwork, NodeRegistry, Partition, Snapshot, SNAPSHOT_EXTENSION, TRUTH_EXTENSION};

pub const SNAPSHOT_COUNT: usize = 10;
const EXPECTED_DEGREE: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Move,
    Birth,
    Death,
    Expand,
    Contract,
    Hide,
    Reappear,
    Merge,
    Split,
}

/// One community event. Community ids are generator-internal and stable
/// across the sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    /// 1-based snapshot index at which the event takes effect.
    pub time: usize,
    pub kind: EventKind,
    pub communities: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct GroundTruthSequence {
    pub network: DynamicNetwork,
    pub truths: Vec<Partition>,
    pub events: Vec<EventRecord>,
}

impl GroundTruthSequence {
    pub fn community_counts(&self) -> Vec<usize> {
        self.truths.iter().map(Partition::community_count).collect()
    }
}

fn check_z(z: usize) -> Result<()> {
    if z > 16 {
        return Err(Error::InvalidParams(format!("z = {z} outside 0..=16")));
    }
    Ok(())
}

/// Samples a graph where each pair is linked independently with probability
/// `p(u, v)`. Pairs involving an `inactive` node are skipped.
fn sample_pairs<R, F>(n: usize, inactive: &[bool], rng: &mut R, p: F) -> Snapshot
where
    R: Rng + ?Sized,
    F: Fn(usize, usize) -> f64,
{
    let mut edges = Vec::new();
    for u in 0..n {
        if inactive[u] {
            continue;
        }
        for (v, &off) in inactive.iter().enumerate().skip(u + 1) {
            if !off && rng.random::<f64>() < p(u, v) {
                edges.push((u, v));
            }
        }
    }
    Snapshot::from_edges(n, edges).expect("generated edges are in range")
}

fn community_sizes(labels: &[usize]) -> Vec<usize> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0; k];
    for &l in labels {
        sizes[l] += 1;
    }
    sizes
}

/// Edges with expected degree 16, of which `z` leave the node's community.
fn gn_snapshot<R: Rng + ?Sized>(labels: &[usize], z: usize, rng: &mut R) -> Snapshot {
    let n = labels.len();
    let sizes = community_sizes(labels);
    let z = z as f64;
    let p_in: Vec<f64> = sizes
        .iter()
        .map(|&s| if s > 1 { (EXPECTED_DEGREE - z) / (s - 1) as f64 } else { 0.0 })
        .collect();
    let p_out: Vec<f64> = sizes
        .iter()
        .map(|&s| if n > s { z / (n - s) as f64 } else { 0.0 })
        .collect();
    sample_pairs(n, &vec![false; n], rng, |u, v| {
        let (a, b) = (labels[u], labels[v]);
        if a == b {
            p_in[a]
        } else {
            (p_out[a] + p_out[b]) / 2.0
        }
    })
}

fn sequence(
    snapshots: Vec<Snapshot>,
    truths: Vec<Partition>,
    events: Vec<EventRecord>,
) -> GroundTruthSequence {
    let n = snapshots.first().map_or(0, Snapshot::node_count);
    let network = DynamicNetwork::new(snapshots, NodeRegistry::sequential(n))
        .expect("generated snapshots share one node universe");
    GroundTruthSequence {
        network,
        truths,
        events,
    }
}

/// 128 nodes in 4 communities of 32 over 10 snapshots. After the first
/// snapshot, 3 random members of every community move to another community
/// at each step and all edges are redrawn.
pub fn gen_synfix(z: usize, seed: u64) -> Result<GroundTruthSequence> {
    check_z(z)?;
    const COMMUNITIES: usize = 4;
    const SIZE: usize = 32;
    const MOVERS: usize = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..COMMUNITIES * SIZE).map(|u| u / SIZE).collect();
    let (mut snapshots, mut truths, mut events) = (Vec::new(), Vec::new(), Vec::new());
    for t in 1..=SNAPSHOT_COUNT {
        if t > 1 {
            let mut moves = Vec::new();
            for c in 0..COMMUNITIES {
                let members: Vec<usize> = (0..labels.len()).filter(|&u| labels[u] == c).collect();
                for &u in members.choose_multiple(&mut rng, MOVERS) {
                    let others: Vec<usize> = (0..COMMUNITIES).filter(|&d| d != c).collect();
                    moves.push((u, *others.choose(&mut rng).expect("four communities")));
                }
            }
            for (u, c) in moves {
                labels[u] = c;
            }
            events.push(EventRecord {
                time: t,
                kind: EventKind::Move,
                communities: (0..COMMUNITIES).collect(),
            });
        }
        snapshots.push(gn_snapshot(&labels, z, &mut rng));
        truths.push(Partition::from_index_labels(&labels));
    }
    Ok(sequence(snapshots, truths, events))
}

/// 256 nodes starting in 4 communities of 64. Snapshots 2-5 each form a new
/// community from 8 members of every original community; snapshot 6 repeats
/// snapshot 5; snapshots 7-10 undo the splits in reverse order.
pub fn gen_synvar(z: usize, seed: u64) -> Result<GroundTruthSequence> {
    check_z(z)?;
    const COMMUNITIES: usize = 4;
    const SIZE: usize = 64;
    const TAKEN: usize = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial: Vec<usize> = (0..COMMUNITIES * SIZE).map(|u| u / SIZE).collect();
    let mut labels = initial.clone();
    let mut splits: Vec<Vec<(usize, usize)>> = Vec::new();
    let (mut snapshots, mut truths, mut events) = (Vec::new(), Vec::new(), Vec::new());
    for t in 1..=SNAPSHOT_COUNT {
        match t {
            2..=5 => {
                let new = COMMUNITIES + splits.len();
                let mut moved = Vec::new();
                for c in 0..COMMUNITIES {
                    let members: Vec<usize> = (0..labels.len()).filter(|&u| labels[u] == c).collect();
                    for &u in members.choose_multiple(&mut rng, TAKEN) {
                        moved.push((u, c));
                    }
                }
                for &(u, _) in &moved {
                    labels[u] = new;
                }
                splits.push(moved);
                events.push(EventRecord {
                    time: t,
                    kind: EventKind::Birth,
                    communities: vec![new],
                });
            }
            7..=10 => {
                let moved = splits.pop().expect("one split per forward step");
                let gone = labels[moved[0].0];
                for (u, c) in moved {
                    labels[u] = c;
                }
                events.push(EventRecord {
                    time: t,
                    kind: EventKind::Death,
                    communities: vec![gone],
                });
            }
            _ => {}
        }
        snapshots.push(gn_snapshot(&labels, z, &mut rng));
        truths.push(Partition::from_index_labels(&labels));
    }
    debug_assert_eq!(labels, initial);
    Ok(sequence(snapshots, truths, events))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventModel {
    BirthDeath,
    ExpandContract,
    Intermittent,
    MergeSplit,
}

impl std::str::FromStr for EventModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "birth-death" => Ok(Self::BirthDeath),
            "expand-contract" => Ok(Self::ExpandContract),
            "intermittent" => Ok(Self::Intermittent),
            "merge-split" => Ok(Self::MergeSplit),
            other => Err(Error::InvalidParams(format!("unknown event model {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EventParams {
    pub nodes: usize,
    pub snapshots: usize,
    pub average_degree: f64,
    pub max_degree: usize,
    /// Fraction of each node's edges that leave its community.
    pub mixing: f64,
    pub min_community: usize,
    pub max_community: usize,
    /// Probability that a node is reassigned at each step.
    pub reassign_probability: f64,
    pub births: usize,
    pub deaths: usize,
    pub expansions: usize,
    pub contractions: usize,
    pub resize_rate: f64,
    pub hide_rate: f64,
    pub merges: usize,
    pub splits: usize,
}

impl Default for EventParams {
    fn default() -> Self {
        Self {
            nodes: 1000,
            snapshots: 5,
            average_degree: 8.0,
            max_degree: 15,
            mixing: 0.2,
            min_community: 24,
            max_community: 35,
            reassign_probability: 0.2,
            births: 3,
            deaths: 3,
            expansions: 3,
            contractions: 3,
            resize_rate: 0.25,
            hide_rate: 0.1,
            merges: 3,
            splits: 3,
        }
    }
}

impl EventParams {
    fn validate(&self) -> Result<()> {
        if self.snapshots == 0 || self.nodes == 0 {
            return Err(Error::InvalidParams("need at least one node and one snapshot".into()));
        }
        if self.min_community < 2 || self.min_community > self.max_community {
            return Err(Error::Infeasible(format!(
                "community size range [{}, {}]",
                self.min_community, self.max_community
            )));
        }
        if self.average_degree <= 0.0 || (self.max_degree as f64) < self.average_degree {
            return Err(Error::InvalidParams("average degree must lie in (0, max degree]".into()));
        }
        for (name, p) in [
            ("mixing", self.mixing),
            ("reassign probability", self.reassign_probability),
            ("resize rate", self.resize_rate),
            ("hide rate", self.hide_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("{name} {p} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Community sizes in `[min, max]` summing to `n`.
fn initial_sizes<R: Rng + ?Sized>(params: &EventParams, rng: &mut R) -> Result<Vec<usize>> {
    let (n, lo, hi) = (params.nodes, params.min_community, params.max_community);
    let target = ((n as f64) / ((lo + hi) as f64 / 2.0)).round().max(1.0) as usize;
    let count = (1..=n)
        .filter(|&c| c * lo <= n && n <= c * hi)
        .min_by_key(|&c| c.abs_diff(target))
        .ok_or_else(|| {
            Error::Infeasible(format!("{n} nodes cannot form communities of size {lo}..={hi}"))
        })?;
    let mut sizes = vec![lo; count];
    let mut open: Vec<usize> = (0..count).collect();
    for _ in 0..n - count * lo {
        let i = rng.random_range(0..open.len());
        sizes[open[i]] += 1;
        if sizes[open[i]] == hi {
            open.swap_remove(i);
        }
    }
    Ok(sizes)
}

/// Mutable community state for the event generator. Community ids are never
/// reused; `alive` marks the ones currently present.
struct World {
    labels: Vec<usize>,
    alive: Vec<bool>,
    hidden: Vec<usize>,
    degree: Vec<usize>,
}

impl World {
    fn live(&self) -> Vec<usize> {
        (0..self.alive.len()).filter(|&c| self.alive[c]).collect()
    }

    fn members(&self, c: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&u| self.labels[u] == c).collect()
    }

    fn spawn(&mut self) -> usize {
        self.alive.push(true);
        self.alive.len() - 1
    }

    fn move_to_random<R: Rng + ?Sized>(&mut self, nodes: &[usize], exclude: &[usize], rng: &mut R) {
        let targets: Vec<usize> = self.live().into_iter().filter(|c| !exclude.contains(c)).collect();
        for &u in nodes {
            if let Some(&c) = targets.choose(rng) {
                self.labels[u] = c;
            }
        }
    }

    fn truth(&self) -> Partition {
        let n = self.labels.len();
        let offset = self.alive.len();
        let labels: Vec<usize> = (0..n)
            .map(|u| {
                if self.hidden.contains(&self.labels[u]) {
                    offset + u
                } else {
                    self.labels[u]
                }
            })
            .collect();
        Partition::from_index_labels(&labels)
    }

    fn snapshot<R: Rng + ?Sized>(&self, mixing: f64, rng: &mut R) -> Snapshot {
        let n = self.labels.len();
        let inactive: Vec<bool> = (0..n).map(|u| self.hidden.contains(&self.labels[u])).collect();
        let mut volume = vec![0.0f64; self.alive.len()];
        let mut total = 0.0;
        for u in (0..n).filter(|&u| !inactive[u]) {
            volume[self.labels[u]] += self.degree[u] as f64;
            total += self.degree[u] as f64;
        }
        let degree = &self.degree;
        let labels = &self.labels;
        sample_pairs(n, &inactive, rng, |u, v| {
            let w = (degree[u] * degree[v]) as f64;
            let (a, b) = (labels[u], labels[v]);
            if a == b {
                (1.0 - mixing) * w / volume[a]
            } else {
                // Normalizing by the volume outside each endpoint's community
                // keeps the expected external degree near `mixing * degree`.
                let out_a = total - volume[a];
                let out_b = total - volume[b];
                mixing * w * 0.5 * (1.0 / out_a + 1.0 / out_b)
            }
            .min(1.0)
        })
    }
}

fn pick<R: Rng + ?Sized>(pool: &[usize], count: usize, rng: &mut R) -> Vec<usize> {
    pool.choose_multiple(rng, count).copied().collect()
}

fn apply_event<R: Rng + ?Sized>(
    world: &mut World,
    model: EventModel,
    params: &EventParams,
    time: usize,
    rng: &mut R,
    log: &mut Vec<EventRecord>,
) {
    let mut record = |kind, communities| log.push(EventRecord { time, kind, communities });
    match model {
        EventModel::BirthDeath => {
            for _ in 0..params.births {
                let donors = world.live();
                let target = rng.random_range(params.min_community..=params.max_community);
                let new = world.spawn();
                let mut taken = 0;
                let mut order = donors.clone();
                order.shuffle(rng);
                for c in order.into_iter().cycle().take(donors.len() * 4) {
                    if taken >= target {
                        break;
                    }
                    let members = world.members(c);
                    let share = (members.len() / 10).max(1).min(target - taken);
                    if members.len() <= share + 2 {
                        continue;
                    }
                    for u in pick(&members, share, rng) {
                        world.labels[u] = new;
                        taken += 1;
                    }
                }
                record(EventKind::Birth, vec![new]);
            }
            for c in pick(&world.live(), params.deaths, rng) {
                if world.live().len() <= 1 {
                    break;
                }
                let members = world.members(c);
                world.alive[c] = false;
                world.move_to_random(&members, &[c], rng);
                record(EventKind::Death, vec![c]);
            }
        }
        EventModel::ExpandContract => {
            let chosen = pick(&world.live(), params.expansions + params.contractions, rng);
            let (grow, shrink) = chosen.split_at(params.expansions.min(chosen.len()));
            for &c in grow {
                let extra = (world.members(c).len() as f64 * params.resize_rate).round() as usize;
                let outside: Vec<usize> = (0..world.labels.len())
                    .filter(|&u| world.labels[u] != c && !grow.contains(&world.labels[u]))
                    .collect();
                for u in pick(&outside, extra, rng) {
                    world.labels[u] = c;
                }
                record(EventKind::Expand, vec![c]);
            }
            for &c in shrink {
                let members = world.members(c);
                let release = (members.len() as f64 * params.resize_rate).round() as usize;
                let leaving = pick(&members, release, rng);
                world.move_to_random(&leaving, &[c], rng);
                record(EventKind::Contract, vec![c]);
            }
        }
        EventModel::Intermittent => {
            let restored = std::mem::take(&mut world.hidden);
            if !restored.is_empty() {
                record(EventKind::Reappear, restored.clone());
            }
            let live = world.live();
            let count = (live.len() as f64 * params.hide_rate).round() as usize;
            let candidates: Vec<usize> = live.into_iter().filter(|c| !restored.contains(c)).collect();
            let mut hide = pick(&candidates, count, rng);
            hide.sort_unstable();
            if !hide.is_empty() {
                world.hidden = hide.clone();
                record(EventKind::Hide, hide);
            }
        }
        EventModel::MergeSplit => {
            for _ in 0..params.merges {
                let live = world.live();
                if live.len() < 2 {
                    break;
                }
                let pair = pick(&live, 2, rng);
                for u in world.members(pair[1]) {
                    world.labels[u] = pair[0];
                }
                world.alive[pair[1]] = false;
                record(EventKind::Merge, pair);
            }
            for c in pick(&world.live(), params.splits, rng) {
                let mut members = world.members(c);
                if members.len() < 6 {
                    continue;
                }
                members.shuffle(rng);
                let new = world.spawn();
                for &u in &members[members.len() / 2..] {
                    world.labels[u] = new;
                }
                record(EventKind::Split, vec![c, new]);
            }
        }
    }
}

/// Planted-partition sequence with per-step node reassignment followed by one
/// kind of community event.
///
/// Degrees are uniform on `[2k - maxk, maxk]` (at least 1) and a `mixing`
/// fraction of each node's expected degree crosses communities. In the
/// intermittent model hidden communities lose all edges for one snapshot and
/// their members are singletons in that snapshot's truth.
pub fn gen_events(model: EventModel, params: &EventParams, seed: u64) -> Result<GroundTruthSequence> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = initial_sizes(params, &mut rng)?;
    let mut labels: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &s)| vec![c; s]).collect();
    labels.shuffle(&mut rng);
    let lo = (2.0 * params.average_degree - params.max_degree as f64).round().max(1.0) as usize;
    let degree = (0..params.nodes)
        .map(|_| rng.random_range(lo..=params.max_degree))
        .collect();
    let mut world = World {
        labels,
        alive: vec![true; sizes.len()],
        hidden: Vec::new(),
        degree,
    };

    let (mut snapshots, mut truths, mut events) = (Vec::new(), Vec::new(), Vec::new());
    for t in 1..=params.snapshots {
        if t > 1 {
            let movers: Vec<usize> = (0..params.nodes)
                .filter(|_| rng.random_bool(params.reassign_probability))
                .collect();
            for u in movers {
                let own = world.labels[u];
                world.move_to_random(&[u], &[own], &mut rng);
            }
            apply_event(&mut world, model, params, t, &mut rng, &mut events);
            // Reassignment and events can empty a community without a death.
            for c in world.live() {
                if world.members(c).is_empty() {
                    world.alive[c] = false;
                }
            }
        }
        snapshots.push(world.snapshot(params.mixing, &mut rng));
        truths.push(world.truth());
    }
    Ok(sequence(snapshots, truths, events))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub generator: String,
    pub seed: u64,
    pub nodes: usize,
    pub snapshots: Vec<String>,
    pub truths: Vec<String>,
    pub community_counts: Vec<usize>,
    pub parameters: serde_json::Value,
}

/// Writes `snapshot_NNN.edges`, `snapshot_NNN.truth`, `events.json` and
/// `manifest.json` into `dir`, creating it if needed.
pub fn write_sequence(
    dir: &Path,
    sequence: &GroundTruthSequence,
    generator: &str,
    seed: u64,
    parameters: serde_json::Value,
) -> Result<Manifest> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let write = |path: PathBuf, text: String| fs::write(&path, text).map_err(|e| Error::io(path, e));
    let registry = sequence.network.registry();
    let mut manifest = Manifest {
        generator: generator.to_string(),
        seed,
        nodes: sequence.network.node_count(),
        snapshots: Vec::new(),
        truths: Vec::new(),
        community_counts: sequence.community_counts(),
        parameters,
    };
    for (t, (snap, truth)) in sequence.network.snapshots().iter().zip(&sequence.truths).enumerate() {
        let stem = format!("snapshot_{:03}", t + 1);
        let edges = format!("{stem}.{SNAPSHOT_EXTENSION}");
        let labels = format!("{stem}.{TRUTH_EXTENSION}");
        write(dir.join(&edges), snap.to_edge_list(registry))?;
        write(dir.join(&labels), truth.to_text(registry))?;
        manifest.snapshots.push(edges);
        manifest.truths.push(labels);
    }
    write(dir.join("events.json"), pretty_json(&sequence.events))?;
    write(dir.join("manifest.json"), pretty_json(&manifest))?;
    Ok(manifest)
}

fn pretty_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;

    #[test]
    fn synfix_shape() {
        let s = gen_synfix(3, 1).unwrap();
        assert_eq!(s.network.len(), 10);
        assert_eq!(s.network.node_count(), 128);
        for truth in &s.truths {
            assert_eq!(truth.community_count(), 4);
            assert_eq!(truth.community_sizes().iter().sum::<usize>(), 128);
        }
        assert_eq!(s.truths[0].community_sizes(), vec![32; 4]);
    }

    #[test]
    fn synfix_z0_modularity() {
        let s = gen_synfix(0, 5).unwrap();
        let q = metrics::modularity(s.network.snapshot(0), &s.truths[0]).unwrap();
        assert!((q - 0.75).abs() < 0.03, "{q}");
    }

    #[test]
    fn synfix_is_deterministic() {
        let a = gen_synfix(4, 9).unwrap();
        let b = gen_synfix(4, 9).unwrap();
        assert_eq!(a.truths, b.truths);
        assert_eq!(a.network.snapshots(), b.network.snapshots());
        assert!(gen_synfix(17, 0).is_err());
    }

    #[test]
    fn synvar_trajectory() {
        let s = gen_synvar(3, 2).unwrap();
        assert_eq!(s.community_counts(), vec![4, 5, 6, 7, 8, 8, 7, 6, 5, 4]);
        assert_eq!(s.truths[4].community_sizes(), vec![32; 8]);
        assert_eq!(s.truths[0].community_sizes(), vec![64; 4]);
        assert_eq!(s.truths[9], s.truths[0]);
    }

    #[test]
    fn initial_sizes_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = EventParams::default();
        let sizes = initial_sizes(&p, &mut rng).unwrap();
        assert_eq!(sizes.iter().sum::<usize>(), 1000);
        assert!(sizes.iter().all(|&s| (24..=35).contains(&s)));
        let bad = EventParams {
            nodes: 40,
            ..EventParams::default()
        };
        assert!(matches!(initial_sizes(&bad, &mut rng), Err(Error::Infeasible(_))));
    }

    #[test]
    fn birth_death_keeps_count_steady() {
        let p = EventParams {
            nodes: 300,
            ..EventParams::default()
        };
        let s = gen_events(EventModel::BirthDeath, &p, 3).unwrap();
        let counts = s.community_counts();
        assert_eq!(counts.len(), 5);
        for w in counts.windows(2) {
            assert!(w[0].abs_diff(w[1]) <= 1, "{counts:?}");
        }
        assert!(s.events.iter().filter(|e| e.kind == EventKind::Birth).count() == 12);
    }

    #[test]
    fn intermittent_hides_nodes() {
        let p = EventParams {
            nodes: 300,
            ..EventParams::default()
        };
        let s = gen_events(EventModel::Intermittent, &p, 8).unwrap();
        let hide = s.events.iter().find(|e| e.kind == EventKind::Hide).unwrap();
        let t = hide.time - 1;
        let snap = s.network.snapshot(t);
        let truth = &s.truths[t];
        let isolated: Vec<usize> = (0..300).filter(|&u| snap.degree(u) == 0).collect();
        assert!(!isolated.is_empty());
        let sizes = truth.community_sizes();
        let hidden_singletons = isolated.iter().filter(|&&u| sizes[truth.label(u)] == 1).count();
        assert!(hidden_singletons > 0);
    }

    #[test]
    fn written_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let s = gen_synfix(2, 4).unwrap();
        let m = write_sequence(dir.path(), &s, "synfix", 4, serde_json::json!({"z": 2})).unwrap();
        assert_eq!(m.snapshots.len(), 10);
        assert_eq!(m.community_counts, vec![4; 10]);
        assert!(dir.path().join("events.json").exists());
        let text = fs::read_to_string(dir.path().join("snapshot_001.edges")).unwrap();
        assert_eq!(text.lines().count(), s.network.snapshot(0).edge_count());
    }
}
