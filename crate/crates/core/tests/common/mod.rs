//! Brute-force reference implementations and random instance builders.
//!
//! Everything here is written directly from the definitions, favoring
//! obviousness over speed, so it can be used to check the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use tmoga_core::{ObjectiveVector, Partition, Snapshot};

pub fn adjacency(s: &Snapshot) -> Vec<Vec<bool>> {
    let n = s.node_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in s.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// `Q = 1/2m Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j)` over all ordered pairs.
pub fn modularity(s: &Snapshot, labels: &[usize]) -> f64 {
    let a = adjacency(s);
    let n = labels.len();
    let k: Vec<f64> = a.iter().map(|row| row.iter().filter(|&&x| x).count() as f64).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += f64::from(u8::from(a[i][j])) - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// NMI from the contingency table with the `−2 Σ N_ij log(...)` form.
pub fn nmi(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let mut joint: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut ra: BTreeMap<usize, f64> = BTreeMap::new();
    let mut rb: BTreeMap<usize, f64> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1.0;
        *ra.entry(x).or_default() += 1.0;
        *rb.entry(y).or_default() += 1.0;
    }
    let num: f64 = joint
        .iter()
        .map(|(&(x, y), &nij)| nij * (nij * n / (ra[&x] * rb[&y])).ln())
        .sum::<f64>()
        * -2.0;
    let den: f64 = ra.values().map(|&c| c * (c / n).ln()).sum::<f64>()
        + rb.values().map(|&c| c * (c / n).ln()).sum::<f64>();
    if den == 0.0 {
        return 1.0;
    }
    num / den
}

/// Order-2 Community Score, straight from the adjacency matrix.
pub fn community_score(s: &Snapshot, labels: &[usize]) -> f64 {
    let a = adjacency(s);
    let groups: BTreeSet<usize> = labels.iter().copied().collect();
    let mut total = 0.0;
    for g in groups {
        let members: Vec<usize> = (0..labels.len()).filter(|&u| labels[u] == g).collect();
        let size = members.len() as f64;
        let mut mu_sq = 0.0;
        let mut volume = 0.0;
        for &i in &members {
            let inside = members.iter().filter(|&&j| a[i][j]).count() as f64;
            mu_sq += (inside / size).powi(2);
            volume += inside;
        }
        total += mu_sq / size * volume;
    }
    total
}

pub fn cid(s: &Snapshot, nodes: &[usize]) -> f64 {
    let a = adjacency(s);
    let mut links = 0;
    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            if a[u][v] {
                links += 1;
            }
        }
    }
    let k = nodes.len() as f64;
    2.0 * links as f64 / (k * (k - 1.0))
}

fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    let (a, b) = (a.values(), b.values());
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Ranks by repeatedly peeling off the members no remaining member dominates.
pub fn peel_ranks(points: &[ObjectiveVector]) -> Vec<usize> {
    let mut rank = vec![0; points.len()];
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut r = 1;
    while !remaining.is_empty() {
        let front: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| !remaining.iter().any(|&j| dominates(&points[j], &points[i])))
            .collect();
        for &i in &front {
            rank[i] = r;
        }
        remaining.retain(|i| !front.contains(i));
        r += 1;
    }
    rank
}

/// Every maximal clique of the subgraph induced by `nodes`, by subset scan.
pub fn maximal_cliques(s: &Snapshot, nodes: &[usize]) -> Vec<Vec<usize>> {
    let a = adjacency(s);
    let k = nodes.len();
    assert!(k <= 16, "subset scan is exponential");
    let complete = |mask: u32| {
        let members: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| nodes[i]).collect();
        members
            .iter()
            .enumerate()
            .all(|(i, &u)| members[i + 1..].iter().all(|&v| a[u][v]))
    };
    let cliques: Vec<u32> = (1u32..1 << k).filter(|&m| complete(m)).collect();
    cliques
        .iter()
        .filter(|&&m| !cliques.iter().any(|&o| o != m && o & m == m))
        .map(|&m| {
            let mut c: Vec<usize> = (0..k).filter(|&i| m >> i & 1 == 1).map(|i| nodes[i]).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

/// All set partitions of `0..n` as label vectors.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, next: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for l in 0..=next {
            cur.push(l);
            go(i + 1, n, cur, next.max(l + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Snapshot {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Snapshot::from_edges(n, edges).unwrap()
}

pub fn random_labels<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let k = rng.random_range(1..=n);
    (0..n).map(|_| rng.random_range(0..k)).collect()
}

pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Partition {
    Partition::from_labels(&random_labels(rng, n))
}

pub fn barbell() -> Snapshot {
    Snapshot::from_edges(6, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]).unwrap()
}
