//! Locus-based adjacency encoding.
//!
//! Each gene names a neighbor of its node (or the node itself); communities are
//! the connected components of the graph `u -> gene[u]`. Decoding goes through
//! a disjoint-set forest and runs in near-linear time.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Partition, Snapshot};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// A chromosome in locus-based adjacency form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocusGenotype {
    genes: Vec<usize>,
}

impl LocusGenotype {
    /// Wraps raw genes after checking them against `snapshot`.
    pub fn new(genes: Vec<usize>, snapshot: &Snapshot) -> Result<Self> {
        let g = Self { genes };
        g.validate(snapshot)?;
        Ok(g)
    }

    /// Wraps raw genes without validation. Callers are responsible for the
    /// neighbor-or-self invariant.
    pub fn from_genes_unchecked(genes: Vec<usize>) -> Self {
        Self { genes }
    }

    /// Every gene points at its own node: all singletons.
    pub fn identity(n: usize) -> Self {
        Self {
            genes: (0..n).collect(),
        }
    }

    pub fn genes(&self) -> &[usize] {
        &self.genes
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn gene(&self, u: usize) -> usize {
        self.genes[u]
    }

    pub fn set_gene(&mut self, u: usize, gene: usize) {
        self.genes[u] = gene;
    }

    pub fn validate(&self, snapshot: &Snapshot) -> Result<()> {
        if self.genes.len() != snapshot.node_count() {
            return Err(Error::LengthMismatch {
                left: self.genes.len(),
                right: snapshot.node_count(),
            });
        }
        for (u, &g) in self.genes.iter().enumerate() {
            if g != u && (g >= snapshot.node_count() || !snapshot.has_edge(u, g)) {
                return Err(Error::InvalidGene { node: u, gene: g });
            }
        }
        Ok(())
    }

    /// Connected components of the gene graph, without revalidating.
    pub fn components(&self) -> Partition {
        let n = self.genes.len();
        let mut sets = DisjointSet::new(n);
        for (u, &g) in self.genes.iter().enumerate() {
            sets.union(u, g);
        }
        let roots: Vec<usize> = (0..n).map(|u| sets.find(u)).collect();
        Partition::from_index_labels(&roots)
    }
}

/// Decodes a genotype into communities, rejecting genes that are neither the
/// node itself nor one of its neighbors.
pub fn decode(genotype: &LocusGenotype, snapshot: &Snapshot) -> Result<Partition> {
    genotype.validate(snapshot)?;
    Ok(genotype.components())
}

/// Per-node community tags (direct encoding).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelVector {
    pub labels: Vec<usize>,
}

impl LabelVector {
    pub fn new(labels: Vec<usize>) -> Self {
        Self { labels }
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_index_labels(&self.labels)
    }
}

impl From<&Partition> for LabelVector {
    fn from(p: &Partition) -> Self {
        Self::new(p.labels().to_vec())
    }
}

/// Encodes direct labels: each gene is a neighbor carrying the same label, or
/// the node itself if there is none.
///
/// Genes start as uniformly chosen same-label neighbors. Where that leaves a
/// connected community in several pieces, pieces are joined along community
/// edges, so a community decodes back whole whenever it is connected in
/// `snapshot`. Disconnected communities come back split into their pieces.
pub fn encode_labels<R: Rng + ?Sized>(
    labels: &[usize],
    snapshot: &Snapshot,
    rng: &mut R,
) -> LocusGenotype {
    let n = labels.len();
    let mut same = Vec::new();
    let mut genes: Vec<usize> = (0..n)
        .map(|u| {
            same.clear();
            same.extend(
                snapshot
                    .neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&v| labels[v] == labels[u]),
            );
            same.choose(rng).copied().unwrap_or(u)
        })
        .collect();

    let mut dsu = DisjointSet::new(n);
    for (u, &g) in genes.iter().enumerate() {
        dsu.union(u, g);
    }
    // Every piece is a functional graph with exactly one cycle. Reversing the
    // path from `u` to that cycle and pointing `u` across the edge drops one
    // cycle edge, so the piece stays connected and hangs off its neighbor.
    let mut seen = vec![usize::MAX; n];
    let mut walk = 0;
    let mut path = Vec::new();
    for u in 0..n {
        for &v in snapshot.neighbors(u) {
            if v < u || labels[v] != labels[u] || !dsu.union(u, v) {
                continue;
            }
            walk += 1;
            path.clear();
            let mut x = u;
            while seen[x] != walk {
                seen[x] = walk;
                path.push(x);
                x = genes[x];
            }
            for k in (1..path.len()).rev() {
                genes[path[k]] = path[k - 1];
            }
            genes[u] = v;
        }
    }
    LocusGenotype { genes }
}

pub fn encode<R: Rng + ?Sized>(
    partition: &Partition,
    snapshot: &Snapshot,
    rng: &mut R,
) -> LocusGenotype {
    encode_labels(partition.labels(), snapshot, rng)
}

/// Each gene drawn uniformly from `adj(u) ∪ {u}`.
pub fn random_genotype<R: Rng + ?Sized>(snapshot: &Snapshot, rng: &mut R) -> LocusGenotype {
    let genes = (0..snapshot.node_count())
        .map(|u| {
            let adj = snapshot.neighbors(u);
            let pick = rng.random_range(0..=adj.len());
            adj.get(pick).copied().unwrap_or(u)
        })
        .collect();
    LocusGenotype { genes }
}

/// Synchronous label propagation.
///
/// Every sweep computes all new labels from the previous vector. A node takes
/// the most frequent label among its neighbors; it keeps its own label when
/// that label ties for the maximum, and otherwise ties go to the smallest
/// label. Isolated nodes never change.
pub fn label_propagation(snapshot: &Snapshot, labels: &LabelVector, iterations: usize) -> LabelVector {
    // Small labels index the tally directly; others are rank-compressed.
    // Either way order is preserved, so tie-breaking is unchanged.
    let n = labels.labels.len();
    let largest = labels.labels.iter().copied().max().unwrap_or(0);
    let distinct: Option<Vec<usize>> = (largest >= 2 * n.max(1)).then(|| {
        let mut d = labels.labels.clone();
        d.sort_unstable();
        d.dedup();
        d
    });
    let mut current: Vec<u32> = match &distinct {
        Some(d) => labels
            .labels
            .iter()
            .map(|l| d.partition_point(|x| x < l) as u32)
            .collect(),
        None => labels.labels.iter().map(|&l| l as u32).collect(),
    };
    let mut next = current.clone();
    let mut tally = Tally::new(distinct.as_ref().map_or(largest + 1, Vec::len));
    // A node's next label depends only on its own and its neighbors' labels,
    // so only nodes next to a change need recomputing.
    let mut dirty = vec![true; current.len()];
    let mut changed = Vec::new();
    for _ in 0..iterations {
        changed.clear();
        for (u, slot) in next.iter_mut().enumerate() {
            *slot = if dirty[u] {
                tally.majority(snapshot.neighbors(u), &current, current[u])
            } else {
                current[u]
            };
            if *slot != current[u] {
                changed.push(u);
            }
        }
        std::mem::swap(&mut current, &mut next);
        if changed.is_empty() {
            break;
        }
        dirty.fill(false);
        for &u in &changed {
            dirty[u] = true;
            for &v in snapshot.neighbors(u) {
                dirty[v] = true;
            }
        }
    }
    LabelVector::new(match distinct {
        Some(d) => current.into_iter().map(|c| d[c as usize]).collect(),
        None => current.into_iter().map(|c| c as usize).collect(),
    })
}

/// Label counts for one node at a time. Counts are zero between calls; each
/// call clears the entries it touched.
struct Tally {
    counts: Vec<u32>,
}

impl Tally {
    fn new(labels: usize) -> Self {
        Self {
            counts: vec![0; labels],
        }
    }

    /// Same rule as `majority_label`.
    fn majority(&mut self, neighbors: &[usize], labels: &[u32], own: u32) -> u32 {
        if neighbors.is_empty() {
            return own;
        }
        let mut max = 0;
        for &v in neighbors {
            let c = &mut self.counts[labels[v] as usize];
            *c += 1;
            max = max.max(*c);
        }
        let keep = self.counts[own as usize] == max;
        let mut best = u32::MAX;
        for &v in neighbors {
            let l = labels[v];
            if self.counts[l as usize] == max {
                best = best.min(l);
            }
        }
        for &v in neighbors {
            self.counts[labels[v] as usize] = 0;
        }
        if keep {
            own
        } else {
            best
        }
    }
}

#[cfg(test)]
fn majority_label(neighbors: &[usize], labels: &[usize], own: usize, scratch: &mut Vec<usize>) -> usize {
    if neighbors.is_empty() {
        return own;
    }
    scratch.clear();
    scratch.extend(neighbors.iter().map(|&v| labels[v]));
    scratch.sort_unstable();
    let mut best = scratch[0];
    let mut best_count = 0;
    let mut own_count = 0;
    let mut i = 0;
    while i < scratch.len() {
        let mut j = i + 1;
        while j < scratch.len() && scratch[j] == scratch[i] {
            j += 1;
        }
        let count = j - i;
        if scratch[i] == own {
            own_count = count;
        }
        // Runs are visited in ascending label order, so `>` keeps the
        // smallest label among equal counts.
        if count > best_count {
            best_count = count;
            best = scratch[i];
        }
        i = j;
    }
    if own_count == best_count {
        own
    } else {
        best
    }
}

/// A random permutation of `0..n`, used as unique starting labels.
pub fn random_unique_labels<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(rng);
    labels
}
