//! Discrete information measures and numeric checks of the compression and
//! NMI inequalities that motivate feature transfer.
//!
//! All logarithms are natural.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cliques::CliqueSet;
use crate::error::{Error, Result};
use crate::graph::Partition;

const SUM_TOLERANCE: f64 = 1e-12;

/// Tolerance used by the theorem checks.
pub const THEOREM_TOLERANCE: f64 = 1e-9;

fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    if let Some(bad) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidDistribution(format!("entry {bad} is not a probability")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > SUM_TOLERANCE * (p.len() as f64).max(1.0) {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(())
}

fn plogp_sum(p: &[f64]) -> f64 {
    -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>()
}

/// Shannon entropy `-Σ p log p` with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> Result<f64> {
    check_distribution(p)?;
    Ok(plogp_sum(p).max(0.0))
}

/// `Σ p log(p / q)`; infinite when `p` puts mass where `q` has none.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    check_distribution(p)?;
    check_distribution(q)?;
    let mut total = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b == 0.0 {
                return Ok(f64::INFINITY);
            }
            total += a * (a / b).ln();
        }
    }
    Ok(total.max(0.0))
}

/// Probability tensor over discrete outcome indices, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution {
    shape: Vec<usize>,
    probs: Vec<f64>,
}

impl JointDistribution {
    pub fn new(shape: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let cells: usize = shape.iter().product();
        if shape.is_empty() || cells != probs.len() {
            return Err(Error::InvalidDistribution(format!(
                "shape {shape:?} does not match {} entries",
                probs.len()
            )));
        }
        check_distribution(&probs)?;
        Ok(Self { shape, probs })
    }

    /// Two-variable joint from a matrix of rows.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDistribution("ragged matrix".into()));
        }
        Self::new(vec![rows.len(), cols], rows.concat())
    }

    /// Joint of two labelings of the same uniformly drawn item.
    pub fn from_labels(a: &[usize], b: &[usize]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        if a.is_empty() {
            return Err(Error::InvalidDistribution("no items".into()));
        }
        let ka = a.iter().max().map_or(0, |m| m + 1);
        let kb = b.iter().max().map_or(0, |m| m + 1);
        let mut probs = vec![0.0; ka * kb];
        let w = 1.0 / a.len() as f64;
        for (&x, &y) in a.iter().zip(b) {
            probs[x * kb + y] += w;
        }
        Self::new(vec![ka, kb], probs)
    }

    pub fn from_partitions(a: &Partition, b: &Partition) -> Result<Self> {
        Self::from_labels(a.labels(), b.labels())
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    fn check_axes(&self, axes: &[usize]) -> Result<()> {
        for (i, &a) in axes.iter().enumerate() {
            if a >= self.shape.len() || axes[..i].contains(&a) {
                return Err(Error::InvalidDistribution(format!("bad axis list {axes:?}")));
            }
        }
        Ok(())
    }

    /// Joint of two groups of axes, each group flattened into one variable.
    pub fn grouped(&self, a: &[usize], b: &[usize]) -> Result<Self> {
        let all: Vec<usize> = a.iter().chain(b).copied().collect();
        self.check_axes(&all)?;
        let size = |axes: &[usize]| axes.iter().map(|&x| self.shape[x]).product::<usize>();
        let (ka, kb) = (size(a), size(b));
        let mut probs = vec![0.0; ka * kb];
        let mut index = vec![0usize; self.shape.len()];
        for &p in &self.probs {
            if p > 0.0 {
                let flat = |axes: &[usize]| axes.iter().fold(0, |acc, &x| acc * self.shape[x] + index[x]);
                probs[flat(a) * kb + flat(b)] += p;
            }
            for axis in (0..self.shape.len()).rev() {
                index[axis] += 1;
                if index[axis] < self.shape[axis] {
                    break;
                }
                index[axis] = 0;
            }
        }
        Ok(Self {
            shape: vec![ka, kb],
            probs,
        })
    }

    /// Marginal over the given axes, flattened into one variable.
    pub fn marginal(&self, axes: &[usize]) -> Result<Vec<f64>> {
        let m = self.grouped(axes, &[])?;
        Ok(m.probs)
    }

    fn row_col_sums(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        if self.shape.len() != 2 {
            return Err(Error::InvalidDistribution(format!(
                "expected two variables, found {}",
                self.shape.len()
            )));
        }
        let (r, c) = (self.shape[0], self.shape[1]);
        let mut rows = vec![0.0; r];
        let mut cols = vec![0.0; c];
        for (row, chunk) in rows.iter_mut().zip(self.probs.chunks(c.max(1))) {
            for (col, &p) in cols.iter_mut().zip(chunk) {
                *row += p;
                *col += p;
            }
        }
        Ok((rows, cols))
    }
}

/// Entropy of the whole joint.
pub fn joint_entropy(joint: &JointDistribution) -> f64 {
    plogp_sum(&joint.probs).max(0.0)
}

/// Mutual information between the two variables of a two-axis joint.
pub fn mutual_information(joint: &JointDistribution) -> Result<f64> {
    let (rows, cols) = joint.row_col_sums()?;
    let c = cols.len();
    let mut total = 0.0;
    for (i, &pa) in rows.iter().enumerate() {
        for (j, &pb) in cols.iter().enumerate() {
            let p = joint.probs[i * c + j];
            if p > 0.0 {
                total += p * (p / (pa * pb)).ln();
            }
        }
    }
    Ok(total.max(0.0))
}

/// `2 I(A;B) / (H(A) + H(B))`, or 1 when both entropies vanish.
pub fn nmi_prob(joint: &JointDistribution) -> Result<f64> {
    let (rows, cols) = joint.row_col_sums()?;
    let denom = plogp_sum(&rows) + plogp_sum(&cols);
    if denom <= 0.0 {
        return Ok(1.0);
    }
    Ok((2.0 * mutual_information(joint)? / denom).clamp(0.0, 1.0))
}

/// Bottleneck objective `I(X; X~) - beta H(X~)` for a joint over (X, X~).
pub fn ib_objective(joint: &JointDistribution, beta: f64) -> Result<f64> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidParams(format!("beta {beta} must be non-negative")));
    }
    let (_, cols) = joint.row_col_sums()?;
    Ok(mutual_information(joint)? - beta * plogp_sum(&cols).max(0.0))
}

/// Node, current community, previous community and stable-feature variables
/// for one transfer step. Nodes are uniformly distributed and every
/// conditional is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IbInstance {
    pub current: Vec<usize>,
    pub previous: Vec<usize>,
    /// Feature label per node; 0 means the node carries no stable feature.
    pub feature: Vec<usize>,
    pub beta: f64,
}

impl IbInstance {
    /// Builds an instance without checking that features are consistent with
    /// the two partitions. Used to exercise failure reporting.
    pub fn from_parts_unchecked(current: Vec<usize>, previous: Vec<usize>, feature: Vec<usize>, beta: f64) -> Self {
        Self {
            current,
            previous,
            feature,
            beta,
        }
    }

    pub fn node_count(&self) -> usize {
        self.current.len()
    }

    /// Joint over (X, X~t, X~t-1, Z).
    pub fn joint(&self) -> Result<JointDistribution> {
        let n = self.node_count();
        if n == 0 || self.previous.len() != n || self.feature.len() != n {
            return Err(Error::InvalidDistribution("instance variables disagree in length".into()));
        }
        let k = |v: &[usize]| v.iter().max().map_or(1, |m| m + 1);
        let shape = vec![n, k(&self.current), k(&self.previous), k(&self.feature)];
        let mut probs = vec![0.0; shape.iter().product()];
        let w = 1.0 / n as f64;
        for x in 0..n {
            let idx = ((x * shape[1] + self.current[x]) * shape[2] + self.previous[x]) * shape[3] + self.feature[x];
            probs[idx] += w;
        }
        JointDistribution::new(shape, probs)
    }
}

/// Builds the instance for a transfer from `previous` to `current` carrying
/// `cliques`.
///
/// Every clique must sit inside one community of each partition. Nodes that
/// share both communities with a clique form its stability cell, and the
/// feature variable names that cell; all other nodes carry no feature.
pub fn build_ib_instance(
    previous: &Partition,
    current: &Partition,
    cliques: &CliqueSet,
    beta: f64,
) -> Result<IbInstance> {
    let n = current.node_count();
    if previous.node_count() != n {
        return Err(Error::LengthMismatch {
            left: previous.node_count(),
            right: n,
        });
    }
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::InvalidParams(format!("beta {beta} must be non-negative")));
    }
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (index, clique) in cliques.cliques.iter().enumerate() {
        if let Some(&u) = clique.iter().find(|&&u| u >= n) {
            return Err(Error::NodeOutOfRange { index: u, n });
        }
        let Some(&first) = clique.first() else { continue };
        for (which, p) in [("current", current), ("previous", previous)] {
            if clique.iter().any(|&u| p.label(u) != p.label(first)) {
                return Err(Error::UnstableClique {
                    clique: index,
                    which,
                });
            }
        }
        let cell = (current.label(first), previous.label(first));
        if !cells.contains(&cell) {
            cells.push(cell);
        }
    }
    let feature = (0..n)
        .map(|x| {
            let cell = (current.label(x), previous.label(x));
            cells.iter().position(|&c| c == cell).map_or(0, |i| i + 1)
        })
        .collect();
    Ok(IbInstance {
        current: current.labels().to_vec(),
        previous: previous.labels().to_vec(),
        feature,
        beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoremReport {
    /// Community entropy never exceeds node entropy.
    pub entropy_bound: bool,
    /// `I(X; X~) - I(X, Z; X~)`.
    pub sufficiency_gap: f64,
    /// `Σ_x p(x) KL(p(z, x~ | x) || p(z | x) p(x~ | x))`.
    pub sufficiency_kl: f64,
    /// `NMI(X~t, Z; X~t-1) - NMI(X~t; X~t-1)`.
    pub transfer_gap: f64,
    /// Bottleneck objective of the current partition at the instance's beta.
    pub ib_value: f64,
}

impl TheoremReport {
    pub fn passes(&self) -> bool {
        self.entropy_bound
            && self.sufficiency_gap >= -THEOREM_TOLERANCE
            && (self.sufficiency_gap - self.sufficiency_kl).abs() <= THEOREM_TOLERANCE
            && self.transfer_gap >= -THEOREM_TOLERANCE
    }
}

pub fn verify_theorems(instance: &IbInstance) -> Result<TheoremReport> {
    const X: usize = 0;
    const CUR: usize = 1;
    const PREV: usize = 2;
    const Z: usize = 3;
    let joint = instance.joint()?;
    let n = instance.node_count();

    let h_x = (n as f64).ln();
    let h_cur = plogp_sum(&joint.marginal(&[CUR])?);
    let h_prev = plogp_sum(&joint.marginal(&[PREV])?);
    let entropy_bound = h_cur <= h_x + THEOREM_TOLERANCE && h_prev <= h_x + THEOREM_TOLERANCE;

    let i_x = mutual_information(&joint.grouped(&[X], &[CUR])?)?;
    let i_xz = mutual_information(&joint.grouped(&[X, Z], &[CUR])?)?;
    let sufficiency_gap = i_x - i_xz;

    let zc = joint.grouped(&[X], &[Z, CUR])?;
    let (kz, kc) = (joint.shape()[Z], joint.shape()[CUR]);
    let mut sufficiency_kl = 0.0;
    for x in 0..n {
        let row = &zc.probs()[x * kz * kc..(x + 1) * kz * kc];
        let px: f64 = row.iter().sum();
        let cond: Vec<f64> = row.iter().map(|p| p / px).collect();
        let pz: Vec<f64> = (0..kz).map(|z| cond[z * kc..(z + 1) * kc].iter().sum()).collect();
        let pc: Vec<f64> = (0..kc).map(|c| (0..kz).map(|z| cond[z * kc + c]).sum()).collect();
        let product: Vec<f64> = (0..kz * kc).map(|i| pz[i / kc] * pc[i % kc]).collect();
        sufficiency_kl += px * kl_divergence(&cond, &product)?;
    }

    let nmi_plain = nmi_prob(&joint.grouped(&[CUR], &[PREV])?)?;
    let nmi_feature = nmi_prob(&joint.grouped(&[CUR, Z], &[PREV])?)?;

    let ib_value = ib_objective(&joint.grouped(&[X], &[CUR])?, instance.beta)?;
    Ok(TheoremReport {
        entropy_bound,
        sufficiency_gap,
        sufficiency_kl,
        transfer_gap: nmi_feature - nmi_plain,
        ib_value,
    })
}

/// All set partitions of `n` items as restricted-growth label vectors.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let limit = if prefix.is_empty() { 0 } else { max + 1 };
        for label in 0..=limit {
            prefix.push(label);
            extend(prefix, max.max(label), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), 0, n, &mut out);
    out
}

/// Checks community entropy against node entropy for every partition of
/// every node count up to `max_nodes`.
pub fn exhaustive_entropy_bound(max_nodes: usize) -> bool {
    (1..=max_nodes).all(|n| {
        let h_x = (n as f64).ln();
        set_partitions(n).iter().all(|labels| {
            let p: Vec<f64> = Partition::from_index_labels(labels)
                .community_sizes()
                .iter()
                .map(|&s| s as f64 / n as f64)
                .collect();
            plogp_sum(&p) <= h_x + THEOREM_TOLERANCE
        })
    })
}

/// Random instance: a previous partition, a perturbed current partition and
/// cliques drawn from shared cells.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R) -> IbInstance {
    let n = rng.random_range(3..=12);
    let k = rng.random_range(1..=4.min(n));
    let prev: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    let mut cur = prev.clone();
    for label in cur.iter_mut() {
        if rng.random_bool(0.25) {
            *label = rng.random_range(0..k + 1);
        }
    }
    let previous = Partition::from_index_labels(&prev);
    let current = Partition::from_index_labels(&cur);

    let mut cells: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        match cells
            .iter_mut()
            .find(|c| current.label(c[0]) == current.label(x) && previous.label(c[0]) == previous.label(x))
        {
            Some(c) => c.push(x),
            None => cells.push(vec![x]),
        }
    }
    let mut cliques = Vec::new();
    for mut cell in cells {
        if cell.len() >= 2 && rng.random_bool(0.5) {
            cell.shuffle(rng);
            let size = rng.random_range(2..=cell.len());
            let mut clique = cell[..size].to_vec();
            clique.sort_unstable();
            cliques.push(clique);
        }
    }
    let beta = rng.random_range(0.0..5.0);
    build_ib_instance(&previous, &current, &CliqueSet::new(cliques, 0), beta)
        .expect("cliques drawn from stability cells are stable")
}

/// Instance whose feature variable splits a community that both partitions
/// agree on, which breaks the NMI inequality.
pub fn faulty_instance() -> IbInstance {
    IbInstance::from_parts_unchecked(
        vec![0, 0, 0, 0, 1, 1, 1, 1],
        vec![0, 0, 0, 0, 1, 1, 1, 1],
        vec![1, 1, 2, 2, 0, 0, 0, 0],
        1.0,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationSummary {
    pub trials: usize,
    pub failures: usize,
    pub entropy_bound_exhaustive: bool,
    pub min_sufficiency_gap: f64,
    pub median_sufficiency_gap: f64,
    pub max_sufficiency_kl_mismatch: f64,
    pub min_transfer_gap: f64,
    pub median_transfer_gap: f64,
}

impl VerificationSummary {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.entropy_bound_exhaustive
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Verifies `trials` random instances; with `inject_fault` the known-bad
/// instance is added to the batch.
pub fn verify_batch(trials: usize, seed: u64, inject_fault: bool) -> Result<VerificationSummary> {
    if trials == 0 {
        return Err(Error::InvalidParams("at least one trial is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances: Vec<IbInstance> = (0..trials).map(|_| random_instance(&mut rng)).collect();
    if inject_fault {
        instances.push(faulty_instance());
    }
    let reports: Vec<TheoremReport> = instances.par_iter().map(verify_theorems).collect::<Result<_>>()?;
    let fold_min = |f: fn(&TheoremReport) -> f64| reports.iter().map(f).fold(f64::INFINITY, f64::min);
    Ok(VerificationSummary {
        trials: reports.len(),
        failures: reports.iter().filter(|r| !r.passes()).count(),
        entropy_bound_exhaustive: exhaustive_entropy_bound(6),
        min_sufficiency_gap: fold_min(|r| r.sufficiency_gap),
        median_sufficiency_gap: median(reports.iter().map(|r| r.sufficiency_gap).collect()),
        max_sufficiency_kl_mismatch: reports
            .iter()
            .map(|r| (r.sufficiency_gap - r.sufficiency_kl).abs())
            .fold(0.0, f64::max),
        min_transfer_gap: fold_min(|r| r.transfer_gap),
        median_transfer_gap: median(reports.iter().map(|r| r.transfer_gap).collect()),
    })
}
