//! Consensus-matrix model selection baseline: discrete document clusters from
//! each factorization's `H`, co-clustering frequencies over runs, and the
//! cophenetic correlation of an agglomerative clustering of `1 − C`.
//!
//! Runs are fitted on document subsamples, so each pair's frequency is taken
//! over the runs in which both documents were present.

use kodama::{linkage, Method};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{condensed_index, pearson};

/// Consensus scores are rescaled against this floor for plotting.
pub const DEFAULT_CONSENSUS_FLOOR: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Linkage {
    #[default]
    Average,
    Single,
    Complete,
}

impl Linkage {
    fn method(self) -> Method {
        match self {
            Linkage::Average => Method::Average,
            Linkage::Single => Method::Single,
            Linkage::Complete => Method::Complete,
        }
    }
}

impl std::str::FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" => Ok(Linkage::Average),
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            other => Err(Error::InvalidArgument(format!("unknown linkage {other:?}"))),
        }
    }
}

/// Binary co-membership of documents in one run, stored as one cluster label per
/// document: entry `(i, j)` is 1 exactly when the labels agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityMatrix {
    labels: Vec<usize>,
}

impl ConnectivityMatrix {
    pub fn from_labels(labels: Vec<usize>) -> Self {
        ConnectivityMatrix { labels }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        u8::from(self.labels[i] == self.labels[j])
    }

    pub fn to_dense(&self) -> Array2<u8> {
        Array2::from_shape_fn((self.n(), self.n()), |(i, j)| self.get(i, j))
    }
}

/// Row index of the largest entry in column `j`, lowest row on ties; `None` if the
/// column is all zero.
pub fn dominant_topic(h: &Array2<f64>, j: usize) -> Option<usize> {
    let col = h.column(j);
    let mut best: Option<(usize, f64)> = None;
    for (r, &v) in col.iter().enumerate() {
        if v > 0.0 && best.is_none_or(|(_, b)| v > b) {
            best = Some((r, v));
        }
    }
    best.map(|(r, _)| r)
}

/// Assign each document (column of `H`) to its highest-weight topic.
pub fn connectivity(h: &Array2<f64>) -> Result<ConnectivityMatrix> {
    let labels = (0..h.ncols())
        .map(|j| dominant_topic(h, j).ok_or(Error::UnassignableDocument { column: j }))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConnectivityMatrix { labels })
}

/// Co-clustering tallies over runs, in condensed upper-triangle form.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsensusMatrix {
    n: usize,
    together: Vec<f64>,
    sampled: Vec<u32>,
    observed: Vec<bool>,
}

impl ConsensusMatrix {
    pub fn new(n: usize) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        ConsensusMatrix {
            n,
            together: vec![0.0; pairs],
            sampled: vec![0; pairs],
            observed: vec![false; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Add one run: `docs[p]` is the corpus index of the document at position `p`
    /// of `conn`. `docs` must be strictly increasing.
    pub fn add_run(&mut self, docs: &[usize], conn: &ConnectivityMatrix) -> Result<()> {
        if docs.len() != conn.n() {
            return Err(Error::InvalidArgument(format!(
                "{} document indices for a {}-document connectivity matrix",
                docs.len(),
                conn.n()
            )));
        }
        if docs.windows(2).any(|w| w[0] >= w[1]) || docs.last().is_some_and(|&d| d >= self.n) {
            return Err(Error::InvalidArgument("run document indices must be increasing and in range".into()));
        }
        let labels = conn.labels();
        for (p, &a) in docs.iter().enumerate() {
            self.observed[a] = true;
            // Index of (a, a + 1); never read when a is the last document.
            let base = a * self.n - a * (a + 1) / 2;
            for (q, &b) in docs.iter().enumerate().skip(p + 1) {
                let idx = base + (b - a - 1);
                self.sampled[idx] += 1;
                if labels[p] == labels[q] {
                    self.together[idx] += 1.0;
                }
            }
        }
        Ok(())
    }

    /// Fraction of co-sampled runs in which `i` and `j` shared a cluster; 0 for
    /// pairs never sampled together. The diagonal is 1 for observed documents.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => f64::from(u8::from(self.observed[i])),
            std::cmp::Ordering::Less => self.ratio(condensed_index(self.n, i, j)),
            std::cmp::Ordering::Greater => self.ratio(condensed_index(self.n, j, i)),
        }
    }

    fn ratio(&self, idx: usize) -> f64 {
        match self.sampled[idx] {
            0 => 0.0,
            s => self.together[idx] / f64::from(s),
        }
    }

    /// Off-diagonal entries in condensed order.
    pub fn condensed(&self) -> Vec<f64> {
        (0..self.together.len()).map(|idx| self.ratio(idx)).collect()
    }

    /// Number of document pairs that never appeared in the same run.
    pub fn unobserved_pairs(&self) -> usize {
        self.sampled.iter().filter(|&&s| s == 0).count()
    }

    pub fn to_dense(&self) -> Array2<f64> {
        Array2::from_shape_fn((self.n, self.n), |(i, j)| self.get(i, j))
    }

    /// Build directly from a dense symmetric matrix with entries in `[0, 1]`, as if
    /// every pair had been observed once with that frequency.
    pub fn from_dense(c: &Array2<f64>) -> Result<Self> {
        let n = c.nrows();
        if c.ncols() != n {
            return Err(Error::InvalidArgument("consensus matrix must be square".into()));
        }
        let mut out = ConsensusMatrix::new(n);
        out.observed.iter_mut().for_each(|o| *o = true);
        for i in 0..n {
            for j in i + 1..n {
                let v = c[[i, j]];
                if !(0.0..=1.0).contains(&v) || (v - c[[j, i]]).abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!("entry ({i}, {j}) = {v} is invalid")));
                }
                let idx = condensed_index(n, i, j);
                out.sampled[idx] = 1;
                out.together[idx] = v;
            }
        }
        Ok(out)
    }
}

/// Accumulate runs, each given as corpus document indices and their connectivity.
pub fn accumulate_consensus(n: usize, runs: &[(Vec<usize>, ConnectivityMatrix)]) -> Result<ConsensusMatrix> {
    if runs.is_empty() {
        return Err(Error::InvalidArgument("no runs to accumulate".into()));
    }
    let mut c = ConsensusMatrix::new(n);
    for (docs, conn) in runs {
        c.add_run(docs, conn)?;
    }
    Ok(c)
}

/// Cophenetic distances of a hierarchical clustering of the condensed distances `d`.
pub fn cophenetic_distances(d: &[f64], n: usize, method: Linkage) -> Vec<f64> {
    let mut work = d.to_vec();
    let dendrogram = linkage(&mut work, n, method.method());
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut coph = vec![0.0; d.len()];
    for step in dendrogram.steps() {
        let a = std::mem::take(&mut members[step.cluster1]);
        let b = std::mem::take(&mut members[step.cluster2]);
        for &x in &a {
            for &y in &b {
                let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                coph[condensed_index(n, lo, hi)] = step.dissimilarity;
            }
        }
        let mut merged = a;
        merged.extend(b);
        members.push(merged);
    }
    coph
}

/// Pearson correlation between `1 − C` and the cophenetic distances of its
/// hierarchical clustering, over the strict upper triangle.
pub fn cophenetic_score(c: &ConsensusMatrix, method: Linkage) -> Result<f64> {
    let n = c.n();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("cophenetic score needs n >= 3, got {n}")));
    }
    let d: Vec<f64> = c.condensed().into_iter().map(|v| 1.0 - v).collect();
    let coph = cophenetic_distances(&d, n, method);
    pearson(&d, &coph)
        .ok_or_else(|| Error::Numerical("consensus distances are constant; correlation undefined".into()))
}

/// `(s − floor) / (max − floor)` clamped to `[0, 1]`; all zeros when no score exceeds the floor.
pub fn rescale_consensus(scores: &[f64], floor: f64) -> Vec<f64> {
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top <= floor {
        return vec![0.0; scores.len()];
    }
    scores
        .iter()
        .map(|s| ((s - floor) / (top - floor)).clamp(0.0, 1.0))
        .collect()
}
