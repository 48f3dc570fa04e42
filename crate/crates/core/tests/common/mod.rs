//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use topic_stability::corpus::Weighting;
use topic_stability::{DocTermMatrix, RankedList, Vocabulary};

/// Dense row-major values as a weighted matrix with terms `t0, t1, ..`.
pub fn matrix(rows: &[Vec<f64>]) -> DocTermMatrix {
    let m = rows.len();
    let n = rows[0].len();
    let vocab = Arc::new(Vocabulary::new((0..m).map(|i| format!("t{i}")).collect()).unwrap());
    let columns = (0..n)
        .map(|j| (0..m).filter(|&i| rows[i][j] != 0.0).map(|i| (i, rows[i][j])).collect())
        .collect();
    let ids = (1..=n).map(|j| j.to_string()).collect();
    DocTermMatrix::from_columns(vocab, ids, columns, Weighting::Weighted).unwrap()
}

pub fn list(items: &[usize]) -> RankedList {
    RankedList::new(items.to_vec()).unwrap()
}

/// Average Jaccard computed by materializing both heads at every depth.
pub fn brute_force_aj(r1: &[usize], r2: &[usize], t: usize) -> f64 {
    let mut total = 0.0;
    for d in 1..=t {
        let h1: HashSet<usize> = r1.iter().take(d).copied().collect();
        let h2: HashSet<usize> = r2.iter().take(d).copied().collect();
        let union = h1.union(&h2).count();
        if union > 0 {
            total += h1.intersection(&h2).count() as f64 / union as f64;
        }
    }
    total / t as f64
}

/// Every permutation of `0..k`, in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Maximum total weight over all permutations.
pub fn brute_force_max(weights: &[Vec<f64>]) -> f64 {
    permutations(weights.len())
        .iter()
        .map(|p| p.iter().enumerate().map(|(i, &j)| weights[i][j]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Cophenetic distance matrix of a textbook O(n³) UPGMA on a dense distance matrix.
pub fn naive_upgma_cophenetic(d: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = d.len();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut coph = vec![vec![0.0; n]; n];
    let avg = |a: &[usize], b: &[usize]| {
        let mut s = 0.0;
        for &i in a {
            for &j in b {
                s += d[i][j];
            }
        }
        s / (a.len() * b.len()) as f64
    };
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 0);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let v = avg(&clusters[a], &clusters[b]);
                if v < best.0 {
                    best = (v, a, b);
                }
            }
        }
        let (h, a, b) = best;
        for &i in &clusters[a] {
            for &j in &clusters[b] {
                coph[i][j] = h;
                coph[j][i] = h;
            }
        }
        let merged = clusters.remove(b);
        clusters[a].extend(merged);
    }
    coph
}

/// Pearson correlation written out from the definition.
pub fn naive_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}
