//! Linear assignment by the Hungarian method (shortest augmenting paths with
//! dual potentials), O(k³) for a k × k cost matrix.

/// Minimum-cost perfect matching on a square cost matrix.
///
/// Returns `assignment[row] = column` and the total cost.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> (Vec<usize>, f64) {
    let n = cost.len();
    if n == 0 {
        return (Vec::new(), 0.0);
    }
    debug_assert!(cost.iter().all(|r| r.len() == n));

    // 1-based arrays; index 0 is the virtual start column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    let total = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .sum();
    (assignment, total)
}

/// Maximum total weight over perfect matchings of the rows `rows` to the columns `cols`.
fn max_weight(weights: &[Vec<f64>], rows: &[usize], cols: &[usize]) -> f64 {
    if rows.is_empty() {
        return 0.0;
    }
    let top = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| weights[i][j]))
        .fold(f64::NEG_INFINITY, f64::max);
    let cost: Vec<Vec<f64>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| top - weights[i][j]).collect())
        .collect();
    let (assignment, _) = min_cost_assignment(&cost);
    assignment
        .iter()
        .enumerate()
        .map(|(r, &c)| weights[rows[r]][cols[c]])
        .sum()
}

/// Permutation maximizing `Σ_i weights[i][π(i)]`.
///
/// Among optimal permutations (within a relative tolerance of 1e-9) the
/// lexicographically smallest is returned, so equal-score matchings resolve the
/// same way on every run.
pub fn max_weight_matching(weights: &[Vec<f64>]) -> Vec<usize> {
    let k = weights.len();
    let scale = weights
        .iter()
        .flatten()
        .fold(1.0f64, |acc, w| acc.max(w.abs()));
    let eps = 1e-9 * scale * k.max(1) as f64;

    let mut free: Vec<usize> = (0..k).collect();
    let rows: Vec<usize> = (0..k).collect();
    let mut target = max_weight(weights, &rows, &free);
    let mut perm = Vec::with_capacity(k);
    for i in 0..k {
        let rest_rows = &rows[i + 1..];
        let mut chosen = None;
        for (pos, &j) in free.iter().enumerate() {
            let rest_cols: Vec<usize> = free.iter().copied().filter(|&c| c != j).collect();
            let rest = max_weight(weights, rest_rows, &rest_cols);
            if weights[i][j] + rest >= target - eps {
                chosen = Some((pos, rest));
                break;
            }
        }
        // Some column always attains the optimum; fall back to the first free one
        // only if rounding pushed every candidate just below the tolerance.
        let (pos, rest) = chosen.unwrap_or_else(|| {
            let j = free[0];
            let rest_cols: Vec<usize> = free[1..].to_vec();
            (0, max_weight(weights, rest_rows, &rest_cols).min(target - weights[i][j]))
        });
        perm.push(free.remove(pos));
        target = rest;
    }
    perm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_cost_matrix() {
        let cost = vec![
            vec![4.0, 1.0, 3.0],
            vec![2.0, 0.0, 5.0],
            vec![3.0, 2.0, 2.0],
        ];
        let (a, total) = min_cost_assignment(&cost);
        assert_eq!(total, 5.0);
        assert_eq!(a, vec![1, 0, 2]);
    }

    #[test]
    fn ties_resolve_to_smallest_permutation() {
        let all_equal = vec![vec![0.5; 3]; 3];
        assert_eq!(max_weight_matching(&all_equal), vec![0, 1, 2]);
        let two_optima = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert_eq!(max_weight_matching(&two_optima), vec![0, 1]);
    }

    #[test]
    fn empty_and_singleton() {
        assert!(max_weight_matching(&[]).is_empty());
        assert_eq!(max_weight_matching(&[vec![0.3]]), vec![0]);
    }
}
