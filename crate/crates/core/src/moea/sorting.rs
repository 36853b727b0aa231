use std::cmp::Ordering;

use super::{DensityEstimator, ObjectiveVector};
use crate::error::{Error, Result};

/// Pareto dominance for minimization.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(dominates_unchecked(a.values(), b.values()))
}

pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly = true;
        }
    }
    strictly
}

/// Fast nondominated sort. Returns the Pareto rank of each vector, starting
/// at 1 for the nondominated set.
pub fn nondominated_sort(objectives: &[ObjectiveVector]) -> Vec<usize> {
    let n = objectives.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        for q in p + 1..n {
            let (a, b) = (objectives[p].values(), objectives[q].values());
            if dominates_unchecked(a, b) {
                dominates_list[p].push(q);
                dominated_by_count[q] += 1;
            } else if dominates_unchecked(b, a) {
                dominates_list[q].push(p);
                dominated_by_count[p] += 1;
            }
        }
    }
    let mut rank = vec![0usize; n];
    let mut current: Vec<usize> = (0..n).filter(|&p| dominated_by_count[p] == 0).collect();
    let mut level = 1;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            rank[p] = level;
            for &q in &dominates_list[p] {
                dominated_by_count[q] -= 1;
                if dominated_by_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        current = next;
        level += 1;
    }
    rank
}

/// Crowding distance of each member of one front. Boundary members of every
/// objective get `f64::INFINITY`; fronts of at most two members are all
/// boundary.
pub fn crowding_distance(front: &[&ObjectiveVector], estimator: DensityEstimator) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let arity = front[0].len();
    let mut distance = vec![0.0f64; n];
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..arity {
        order.sort_by(|&a, &b| {
            front[a].0[m]
                .partial_cmp(&front[b].0[m])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let lo = front[order[0]].0[m];
        let hi = front[order[n - 1]].0[m];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for i in 1..n - 1 {
            let own = front[order[i]].0[m];
            let prev = front[order[i - 1]].0[m];
            let next = front[order[i + 1]].0[m];
            let gap = match estimator {
                DensityEstimator::Standard => next - prev,
                DensityEstimator::ShiftBased => next.max(own) - prev.max(own),
            };
            distance[order[i]] += gap / range;
        }
    }
    distance
}
