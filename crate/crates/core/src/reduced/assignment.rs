//! Optimal assignment and the quotient distance on unordered point sets.

use serde::Serialize;

use super::LabeledPointSet;
use crate::error::{Error, Result};

/// Result of [`dx_distance`]: the distance and the matching `i ↦ σ(i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DxMatch {
    pub distance: f64,
    pub permutation: Vec<usize>,
}

/// Minimum-cost perfect assignment for a square cost matrix (row-major).
///
/// Returns `assign[row] = column`. Entries equal to `+∞` are forbidden.
/// Runs the shortest-augmenting-path Hungarian method in `O(n³)`.
pub fn solve_assignment(cost: &[f64], n: usize) -> Result<Vec<usize>> {
    if cost.len() != n * n {
        return Err(Error::ShapeMismatch {
            expected: n * n,
            got: cost.len(),
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // 1-based potentials; column 0 is a virtual source.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = usize::MAX;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if j1 == usize::MAX || !delta.is_finite() {
                return Err(Error::Config("assignment problem has no finite solution".into()));
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0; n];
    for j in 1..=n {
        assign[p[j] - 1] = j - 1;
    }
    Ok(assign)
}

/// Total cost of an assignment.
pub fn assignment_cost(cost: &[f64], n: usize, assign: &[usize]) -> f64 {
    assign.iter().enumerate().map(|(i, &j)| cost[i * n + j]).sum()
}

/// Quotient distance `min_σ (Σ |p_i − q_σ(i)|²)^{1/2}`.
///
/// When several permutations are optimal the lexicographically smallest one
/// is reported. Ties are detected with a relative tolerance of `1e-12`.
pub fn dx_distance(p: &LabeledPointSet, q: &LabeledPointSet) -> Result<DxMatch> {
    let n = p.len();
    if q.len() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            got: q.len(),
        });
    }
    let cost: Vec<f64> = (0..n * n)
        .map(|k| p.0[k / n].dist(q.0[k % n]).powi(2))
        .collect();
    let best = solve_assignment(&cost, n)?;
    let optimum = assignment_cost(&cost, n, &best);
    let tol = 1e-12 * (1.0 + optimum);

    // Fix rows one at a time to the smallest column that still admits an optimum.
    let mut fixed: Vec<usize> = Vec::with_capacity(n);
    let mut restricted = cost.clone();
    let mut permutation = best.clone();
    for i in 0..n {
        let mut chosen = None;
        for j in 0..n {
            if fixed.contains(&j) {
                continue;
            }
            if j == permutation[i] {
                chosen = Some((j, permutation.clone()));
                break;
            }
            let mut trial = restricted.clone();
            for jj in 0..n {
                if jj != j {
                    trial[i * n + jj] = f64::INFINITY;
                }
            }
            if let Ok(a) = solve_assignment(&trial, n) {
                if assignment_cost(&cost, n, &a) <= optimum + tol {
                    chosen = Some((j, a));
                    break;
                }
            }
        }
        let (j, a) = chosen.expect("the current optimum always admits its own column");
        for jj in 0..n {
            if jj != j {
                restricted[i * n + jj] = f64::INFINITY;
            }
        }
        fixed.push(j);
        permutation = a;
    }
    Ok(DxMatch {
        distance: optimum.max(0.0).sqrt(),
        permutation,
    })
}
