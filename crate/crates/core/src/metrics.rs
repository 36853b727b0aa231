//! Partition quality and similarity measures.
//!
//! All logarithms are natural. NMI is invariant to the log base, so this only
//! matters when comparing raw mutual-information values.

use crate::error::{Error, Result};
use crate::graph::{Partition, Snapshot};

fn check_universe(snapshot: &Snapshot, partition: &Partition) -> Result<()> {
    if snapshot.node_count() != partition.node_count() {
        return Err(Error::NodeUniverse(format!(
            "partition has {} nodes, snapshot has {}",
            partition.node_count(),
            snapshot.node_count()
        )));
    }
    Ok(())
}

/// Newman modularity `Σ_i [ l_i/|E| − (d_i / 2|E|)² ]`.
pub fn modularity(snapshot: &Snapshot, partition: &Partition) -> Result<f64> {
    check_universe(snapshot, partition)?;
    let m = snapshot.edge_count();
    if m == 0 {
        return Err(Error::UndefinedMetric("modularity of a graph without edges"));
    }
    let k = partition.community_count();
    let mut internal = vec![0usize; k];
    let mut degree = vec![0usize; k];
    for u in 0..snapshot.node_count() {
        let lu = partition.label(u);
        degree[lu] += snapshot.degree(u);
        internal[lu] += snapshot
            .neighbors(u)
            .iter()
            .filter(|&&v| v > u && partition.label(v) == lu)
            .count();
    }
    let m = m as f64;
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&l, &d)| {
            let share = d as f64 / (2.0 * m);
            l as f64 / m - share * share
        })
        .sum())
}

/// Community Score of order 2.
///
/// `Σ_i [ (Σ_{m∈C_i} μ_m²) / |C_i| · Σ_{m,n∈C_i} A_mn ]` with
/// `μ_m = (1/|C_i|) Σ_{n∈C_i} A_mn`. The inner adjacency sum runs over ordered
/// pairs, so it equals twice the number of internal edges.
pub fn community_score(snapshot: &Snapshot, partition: &Partition) -> Result<f64> {
    check_universe(snapshot, partition)?;
    let sizes = partition.community_sizes();
    let k = sizes.len();
    let mut mu_sq = vec![0.0f64; k];
    let mut volume = vec![0usize; k];
    for u in 0..snapshot.node_count() {
        let lu = partition.label(u);
        let inside = snapshot
            .neighbors(u)
            .iter()
            .filter(|&&v| partition.label(v) == lu)
            .count();
        let mu = inside as f64 / sizes[lu] as f64;
        mu_sq[lu] += mu * mu;
        volume[lu] += inside;
    }
    Ok((0..k)
        .map(|c| mu_sq[c] / sizes[c] as f64 * volume[c] as f64)
        .sum())
}

/// Community internal density `2 L(S) / (|S| (|S| − 1))`.
pub fn cid(snapshot: &Snapshot, nodes: &[usize]) -> Result<f64> {
    let mut set = nodes.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.len() < 2 {
        return Err(Error::UndefinedMetric("CID of fewer than two nodes"));
    }
    let internal = snapshot.internal_edge_count(&set)?;
    let s = set.len() as f64;
    Ok(2.0 * internal as f64 / (s * (s - 1.0)))
}

/// Shared-node counts between the communities of two partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<usize>>,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.row_sums.iter().sum()
    }
}

fn check_pair(a: &Partition, b: &Partition) -> Result<()> {
    if a.node_count() != b.node_count() {
        return Err(Error::NodeUniverse(format!(
            "partitions over {} and {} nodes",
            a.node_count(),
            b.node_count()
        )));
    }
    Ok(())
}

/// `counts[i][j] = |C_i^A ∩ C_j^B|`.
pub fn confusion(a: &Partition, b: &Partition) -> Result<ConfusionMatrix> {
    check_pair(a, b)?;
    let mut counts = vec![vec![0usize; b.community_count()]; a.community_count()];
    for u in 0..a.node_count() {
        counts[a.label(u)][b.label(u)] += 1;
    }
    Ok(ConfusionMatrix {
        counts,
        row_sums: a.community_sizes(),
        col_sums: b.community_sizes(),
    })
}

/// Normalized mutual information between two partitions of the same nodes.
///
/// When both partitions are a single community the ratio is 0/0; the
/// partitions are then identical and the result is 1.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    check_pair(a, b)?;
    let n = a.node_count();
    if n == 0 {
        return Ok(1.0);
    }
    // Sparse contingency table: sort (label_a, label_b) pairs and count runs.
    let mut pairs: Vec<(usize, usize)> = (0..n).map(|u| (a.label(u), b.label(u))).collect();
    pairs.sort_unstable();
    let sizes_a = a.community_sizes();
    let sizes_b = b.community_sizes();
    let nf = n as f64;

    let mut numerator = 0.0;
    let mut i = 0;
    while i < pairs.len() {
        let mut j = i + 1;
        while j < pairs.len() && pairs[j] == pairs[i] {
            j += 1;
        }
        let c = (j - i) as f64;
        let (la, lb) = pairs[i];
        numerator += c * (c * nf / (sizes_a[la] as f64 * sizes_b[lb] as f64)).ln();
        i = j;
    }
    let numerator = -2.0 * numerator;
    let denominator: f64 = sizes_a
        .iter()
        .chain(&sizes_b)
        .map(|&s| s as f64 * (s as f64 / nf).ln())
        .sum();
    if denominator == 0.0 {
        return Ok(1.0);
    }
    Ok((numerator / denominator).clamp(0.0, 1.0))
}
