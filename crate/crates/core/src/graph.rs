//! Dynamic network model: snapshots over a shared node universe, partitions,
//! and the plain-text formats used to move them in and out of the library.
//!
//! Edge lists hold one `u v` pair per line; `#` starts a comment line.
//! Partition (and ground-truth) files hold one `node_id label` pair per line.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Maps external node ids to dense indices `0..n`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeRegistry {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry whose ids are the decimal strings `"0".."n-1"`.
    pub fn sequential(n: usize) -> Self {
        let mut reg = Self::new();
        for i in 0..n {
            reg.intern(&i.to_string());
        }
        reg
    }

    pub fn intern(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len();
        self.ids.push(id.to_owned());
        self.index.insert(id.to_owned(), i);
        i
    }

    pub fn get(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn id(&self, index: usize) -> &str {
        &self.ids[index]
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// An undirected simple graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Snapshot {
    /// Builds a snapshot from an arbitrary edge list. Self-loops and repeated
    /// edges (in either orientation) are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::NodeOutOfRange { index: x, n });
                }
            }
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut degree_sum = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Ok(Self {
            adjacency,
            edge_count: degree_sum / 2,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Every undirected edge once, as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Same graph padded with isolated nodes up to `n` nodes.
    pub fn padded(mut self, n: usize) -> Self {
        if n > self.adjacency.len() {
            self.adjacency.resize(n, Vec::new());
        }
        self
    }

    /// Number of edges with both endpoints in `nodes`. Duplicates in `nodes`
    /// are ignored.
    pub fn internal_edge_count(&self, nodes: &[usize]) -> Result<usize> {
        let n = self.node_count();
        let mut member = vec![false; n];
        for &u in nodes {
            if u >= n {
                return Err(Error::NodeOutOfRange { index: u, n });
            }
            member[u] = true;
        }
        let mut count = 0;
        for u in (0..n).filter(|&u| member[u]) {
            count += self.adjacency[u]
                .iter()
                .filter(|&&v| v > u && member[v])
                .count();
        }
        Ok(count)
    }

    /// Canonical edge-list text: sorted unique pairs, external ids.
    pub fn to_edge_list(&self, registry: &NodeRegistry) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", registry.id(u), registry.id(v));
        }
        out
    }
}

/// Parses an edge list, interning unseen ids into `registry`. The returned
/// snapshot spans every node currently in the registry.
pub fn load_edge_list<R: BufRead>(reader: R, registry: &mut NodeRegistry) -> Result<Snapshot> {
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected two node ids, found {} tokens", tokens.len()),
            });
        }
        let u = registry.intern(tokens[0]);
        let v = registry.intern(tokens[1]);
        edges.push((u, v));
    }
    Snapshot::from_edges(registry.len(), edges)
}

/// Time-ordered snapshots sharing one node universe.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicNetwork {
    snapshots: Vec<Snapshot>,
    registry: NodeRegistry,
}

impl DynamicNetwork {
    pub fn new(snapshots: Vec<Snapshot>, registry: NodeRegistry) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::NoSnapshots);
        }
        let n = registry.len();
        if let Some((t, s)) = snapshots
            .iter()
            .enumerate()
            .find(|(_, s)| s.node_count() != n)
        {
            return Err(Error::NodeUniverse(format!(
                "snapshot {} has {} nodes, registry has {}",
                t + 1,
                s.node_count(),
                n
            )));
        }
        Ok(Self {
            snapshots,
            registry,
        })
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn snapshot(&self, t: usize) -> &Snapshot {
        &self.snapshots[t]
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.registry.len()
    }

    pub fn registry(&self) -> &NodeRegistry {
        &self.registry
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Reject inputs where some snapshot file does not mention every node.
    pub strict: bool,
}

/// Files in `dir` with the given extension, sorted lexicographically by name.
///
/// Ordering is by file name, not numeric value: `10.edges` sorts before
/// `2.edges`. Zero-pad time indices to avoid surprises.
pub fn list_files(dir: &Path, extension: &str) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        if path.is_file() && path.extension().is_some_and(|x| x == extension) {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

pub const SNAPSHOT_EXTENSION: &str = "edges";
pub const TRUTH_EXTENSION: &str = "truth";
pub const PARTITION_EXTENSION: &str = "part";

/// Loads a dynamic network from a directory of `*.edges` files or from an
/// explicit list of files (taken in the given order).
pub fn load_dynamic(paths: &[PathBuf], options: LoadOptions) -> Result<DynamicNetwork> {
    load_dynamic_with(paths, options, NodeRegistry::new())
}

/// Like [`load_dynamic`], but starts from `registry` so that nodes missing
/// from every edge list (for example ones listed only in a truth file) are
/// kept as isolated nodes.
pub fn load_dynamic_with(paths: &[PathBuf], options: LoadOptions, mut registry: NodeRegistry) -> Result<DynamicNetwork> {
    let files = match paths {
        [single] if single.is_dir() => list_files(single, SNAPSHOT_EXTENSION)?,
        _ => paths.to_vec(),
    };
    if files.is_empty() {
        return Err(Error::NoSnapshots);
    }
    let mut snapshots = Vec::with_capacity(files.len());
    let mut seen_counts = Vec::with_capacity(files.len());
    for path in &files {
        let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let snap = load_edge_list(std::io::BufReader::new(file), &mut registry)?;
        let mentioned = (0..snap.node_count()).filter(|&u| snap.degree(u) > 0).count();
        seen_counts.push(mentioned);
        snapshots.push(snap);
    }
    let n = registry.len();
    if options.strict {
        if let Some(t) = seen_counts.iter().position(|&c| c != n) {
            return Err(Error::NodeUniverse(format!(
                "{} mentions {} of {} nodes",
                files[t].display(),
                seen_counts[t],
                n
            )));
        }
    }
    let snapshots = snapshots.into_iter().map(|s| s.padded(n)).collect();
    DynamicNetwork::new(snapshots, registry)
}

/// A disjoint, covering assignment of nodes to communities.
///
/// Labels are kept in canonical form (numbered `0..k` in order of first
/// appearance), so two partitions compare equal iff they group the nodes the
/// same way.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    count: usize,
}

impl Partition {
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let mut map: HashMap<L, usize> = HashMap::with_capacity(labels.len().min(1024));
        let mut canonical = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = map.len();
            canonical.push(*map.entry(l).or_insert(next));
        }
        Self {
            count: map.len(),
            labels: canonical,
        }
    }

    /// Canonicalizes labels that are small non-negative integers (at most a
    /// few times the node count), avoiding hashing.
    pub fn from_index_labels(labels: &[usize]) -> Self {
        let bound = labels.iter().copied().max().map_or(0, |m| m + 1);
        if bound > 4 * labels.len() + 16 {
            return Self::from_labels(labels);
        }
        let mut map = vec![usize::MAX; bound];
        let mut count = 0;
        let canonical = labels
            .iter()
            .map(|&l| {
                if map[l] == usize::MAX {
                    map[l] = count;
                    count += 1;
                }
                map[l]
            })
            .collect();
        Self {
            labels: canonical,
            count,
        }
    }

    /// Builds a partition from explicit communities; they must be disjoint,
    /// non-empty, and cover `0..n`.
    pub fn from_communities(n: usize, communities: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (c, members) in communities.iter().enumerate() {
            if members.is_empty() {
                return Err(Error::InvalidParams(format!("community {c} is empty")));
            }
            for &u in members {
                if u >= n {
                    return Err(Error::NodeOutOfRange { index: u, n });
                }
                if labels[u] != usize::MAX {
                    return Err(Error::InvalidParams(format!(
                        "node {u} appears in more than one community"
                    )));
                }
                labels[u] = c;
            }
        }
        if let Some(u) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidParams(format!("node {u} is not covered")));
        }
        Ok(Self::from_labels(&labels))
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
            count: n,
        }
    }

    pub fn whole(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            count: usize::from(n > 0),
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn community_count(&self) -> usize {
        self.count
    }

    pub fn label(&self, u: usize) -> usize {
        self.labels[u]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Communities as sorted member lists, indexed by canonical label.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (u, &l) in self.labels.iter().enumerate() {
            out[l].push(u);
        }
        out
    }

    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Text form: one `node_id label` line per node.
    pub fn to_text(&self, registry: &NodeRegistry) -> String {
        let mut out = String::new();
        for (u, &l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "{} {}", registry.id(u), l);
        }
        out
    }
}

/// Reads a `node_id label` file against a fixed registry. Every registry node
/// must be labelled exactly once.
pub fn read_partition<R: BufRead>(reader: R, registry: &NodeRegistry) -> Result<Partition> {
    let n = registry.len();
    let mut labels: Vec<Option<String>> = vec![None; n];
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected `node_id label`, found {} tokens", tokens.len()),
            });
        }
        let u = registry.get(tokens[0]).ok_or_else(|| Error::Parse {
            line: lineno + 1,
            message: format!("unknown node id `{}`", tokens[0]),
        })?;
        if labels[u].replace(tokens[1].to_owned()).is_some() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("node `{}` labelled twice", tokens[0]),
            });
        }
    }
    if let Some(u) = labels.iter().position(Option::is_none) {
        return Err(Error::NodeUniverse(format!(
            "node `{}` has no label",
            registry.id(u)
        )));
    }
    let labels: Vec<String> = labels.into_iter().map(Option::unwrap).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    Ok(Partition::from_labels(&refs))
}

/// Builds a registry from the node ids of a partition file, in file order.
pub fn registry_from_partition_text<R: BufRead>(reader: R) -> Result<NodeRegistry> {
    let mut registry = NodeRegistry::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_whitespace().next() {
            Some(id) => {
                registry.intern(id);
            }
            None => continue,
        }
    }
    Ok(registry)
}
