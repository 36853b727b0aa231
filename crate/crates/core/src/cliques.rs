//! Feature extraction: greedy discovery of small dense node sets ("cliques")
//! inside the communities of a solution.
//!
//! The search is a depth-first backtracking over larger-index neighbors with
//! three speedups: branches whose density drops below the CID threshold are
//! pruned (greedy, so deeper qualifying sets may be missed), nodes are only
//! added in ascending index order, and sets are capped at `max_depth` nodes.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{NodeRegistry, Partition, Snapshot};
use crate::metrics;

/// Node-disjoint dense subgraphs taken from one snapshot's solution.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueSet {
    pub cliques: Vec<Vec<usize>>,
    /// Time index of the snapshot the cliques were extracted from.
    pub source_snapshot: usize,
}

impl CliqueSet {
    pub fn new(cliques: Vec<Vec<usize>>, source_snapshot: usize) -> Self {
        Self {
            cliques,
            source_snapshot,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn node_count(&self) -> usize {
        self.cliques.iter().map(Vec::len).sum()
    }

    /// One clique per line, sorted external ids separated by spaces.
    pub fn to_text(&self, registry: &NodeRegistry) -> String {
        let mut out = String::new();
        for clique in &self.cliques {
            let mut ids: Vec<&str> = clique.iter().map(|&u| registry.id(u)).collect();
            ids.sort_unstable();
            let _ = writeln!(out, "{}", ids.join(" "));
        }
        out
    }
}

/// Statistics from one extraction, for complexity smoke checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Number of tentative one-node extensions evaluated.
    pub expansions: u64,
}

struct TreeSearch<'a> {
    snapshot: &'a Snapshot,
    in_community: Vec<bool>,
    searched: Vec<bool>,
    threshold: f64,
    max_depth: usize,
    stats: SearchStats,
}

impl TreeSearch<'_> {
    fn forward_neighbors(&self, node: usize, subgraph: &[usize]) -> impl Iterator<Item = usize> + '_ {
        let owned: Vec<usize> = subgraph.to_vec();
        self.snapshot
            .neighbors(node)
            .iter()
            .copied()
            .filter(move |&v| v > node && self.in_community[v] && !self.searched[v] && !owned.contains(&v))
    }

    /// Largest qualifying extension of `subgraph`, or an empty set when no
    /// set of at least three nodes qualifies.
    fn grow(&mut self, subgraph: &[usize], internal: usize, candidate: &[usize]) -> Vec<usize> {
        let mut clique = subgraph.to_vec();
        for (i, &node) in candidate.iter().enumerate() {
            self.stats.expansions += 1;
            let mut next_candidate = candidate[i + 1..].to_vec();
            for v in self.forward_neighbors(node, subgraph) {
                if !next_candidate.contains(&v) {
                    next_candidate.push(v);
                }
            }
            let links = subgraph
                .iter()
                .filter(|&&w| self.snapshot.has_edge(node, w))
                .count();
            let next_internal = internal + links;
            let mut next = subgraph.to_vec();
            next.push(node);
            let s = next.len() as f64;
            let density = 2.0 * next_internal as f64 / (s * (s - 1.0));
            if density >= self.threshold {
                if next.len() >= self.max_depth {
                    return next;
                }
                let result = self.grow(&next, next_internal, &next_candidate);
                if result.len() > clique.len() {
                    clique = result;
                }
                // Sets never exceed `max_depth`, so nothing later can be larger.
                if clique.len() >= self.max_depth {
                    break;
                }
            }
        }
        if clique.len() >= 3 {
            clique
        } else {
            Vec::new()
        }
    }
}

/// Extracts cliques from one community. See the module docs for the search.
pub fn extract_cliques(
    snapshot: &Snapshot,
    community: &[usize],
    cid_threshold: f64,
    max_depth: usize,
) -> CliqueSet {
    extract_cliques_with_stats(snapshot, community, cid_threshold, max_depth).0
}

pub fn extract_cliques_with_stats(
    snapshot: &Snapshot,
    community: &[usize],
    cid_threshold: f64,
    max_depth: usize,
) -> (CliqueSet, SearchStats) {
    let mut members = community.to_vec();
    members.sort_unstable();
    members.dedup();
    if members.len() <= 2 {
        return (CliqueSet::default(), SearchStats::default());
    }
    let whole = metrics::cid(snapshot, &members).unwrap_or(0.0);
    if whole >= cid_threshold {
        return (CliqueSet::new(vec![members], 0), SearchStats::default());
    }
    if max_depth < 3 {
        return (CliqueSet::default(), SearchStats::default());
    }

    let n = snapshot.node_count();
    let mut in_community = vec![false; n];
    for &u in &members {
        in_community[u] = true;
    }
    let mut search = TreeSearch {
        snapshot,
        in_community,
        searched: vec![false; n],
        threshold: cid_threshold,
        max_depth,
        stats: SearchStats::default(),
    };
    let mut cliques = Vec::new();
    for &node in &members {
        if search.searched[node] {
            continue;
        }
        let start = [node];
        let candidate: Vec<usize> = search.forward_neighbors(node, &start).collect();
        let clique = search.grow(&start, 0, &candidate);
        if clique.len() >= 3 {
            for &u in &clique {
                search.searched[u] = true;
            }
            cliques.push(clique);
        }
    }
    (CliqueSet::new(cliques, 0), search.stats)
}

/// Extracts cliques from every community of `partition`.
pub fn extract_all(
    snapshot: &Snapshot,
    partition: &Partition,
    cid_threshold: f64,
    max_depth: usize,
) -> CliqueSet {
    let cliques = partition
        .communities()
        .par_iter()
        .map(|c| extract_cliques(snapshot, c, cid_threshold, max_depth).cliques)
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    CliqueSet::new(cliques, 0)
}
