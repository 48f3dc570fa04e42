//! The stability protocol for choosing the number of topics.
//!
//! Samples of `β·n` documents are drawn once. For every `k` in the range a
//! deterministic reference model is fitted to the full corpus (NNDSVD start)
//! and one randomly initialized model is fitted to each sample. `stability(k)`
//! is the mean agreement between the reference ranking set and the `τ` sample
//! ranking sets. All `(k, sample)` factorizations are independent and run in
//! parallel; results are collected in `(k, sample)` order, so the report does
//! not depend on scheduling.

use std::sync::Arc;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::agreement::agree;
use crate::consensus::{
    cophenetic_score, dominant_topic, rescale_consensus, ConnectivityMatrix, ConsensusMatrix, Linkage,
};
use crate::corpus::{sample_columns, DocTermMatrix, Vocabulary};
use crate::error::{Error, Result};
use crate::factorization::{
    extract_ranking_set, nmf, ranking_set_from_topics, Factorization, InitStrategy, NmfOptions,
    RankingSet, DEFAULT_INNER_ITER, DEFAULT_TOL,
};
use crate::seed;
use crate::stats::mean;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    pub k_min: usize,
    pub k_max: usize,
    /// Number of document samples.
    pub tau: usize,
    /// Fraction of documents in each sample.
    pub beta: f64,
    /// Number of top terms per topic.
    pub t: usize,
    pub max_iter: usize,
    pub seed: u64,
    pub tol: f64,
    pub inner_iter: usize,
    /// A curve whose range is below this value counts as flat.
    pub flat_range: f64,
    /// A flat curve whose maximum is below this value signals no clustering tendency.
    pub low_stability: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig {
            k_min: 2,
            k_max: 12,
            tau: 100,
            beta: 0.8,
            t: 20,
            max_iter: 50,
            seed: 0,
            tol: DEFAULT_TOL,
            inner_iter: DEFAULT_INNER_ITER,
            flat_range: 0.1,
            low_stability: 0.5,
        }
    }
}

impl StabilityConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if self.k_min < 2 {
            return bad(format!("k_min must be at least 2, got {}", self.k_min));
        }
        if self.k_max < self.k_min {
            return bad(format!("k_max {} is below k_min {}", self.k_max, self.k_min));
        }
        if self.tau == 0 {
            return bad("tau must be at least 1".into());
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return bad(format!("beta {} outside (0, 1]", self.beta));
        }
        if self.t == 0 {
            return bad("t must be at least 1".into());
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1".into());
        }
        Ok(())
    }

    pub fn k_values(&self) -> Vec<usize> {
        (self.k_min..=self.k_max).collect()
    }

    fn nmf_options(&self) -> NmfOptions {
        NmfOptions {
            max_iter: self.max_iter,
            tol: self.tol,
            inner_iter: self.inner_iter,
        }
    }

    /// Seed of the random start for sample `sample` at rank `k`.
    pub fn run_seed(&self, k: usize, sample: usize) -> u64 {
        seed::derive(self.seed, &[seed::FACTOR_STREAM, k as u64, sample as u64])
    }

    /// Seed of the document selection for sample `sample`.
    pub fn sample_seed(&self, sample: usize) -> u64 {
        sample_seed(self.seed, sample)
    }
}

fn sample_seed(master: u64, sample: usize) -> u64 {
    seed::derive(master, &[seed::SAMPLE_STREAM, sample as u64])
}

/// `tau` independent document samples of size `floor(beta · n)`.
pub fn generate_samples(matrix: &DocTermMatrix, tau: usize, beta: f64, seed: u64) -> Result<Vec<DocTermMatrix>> {
    (0..tau)
        .map(|i| sample_columns(matrix, beta, sample_seed(seed, i)))
        .collect()
}

/// Hash of the document selection of every sample, in order.
pub fn samples_fingerprint(samples: &[DocTermMatrix]) -> String {
    let mut h = Sha256::new();
    for s in samples {
        for &d in s.origin() {
            h.update((d as u64).to_le_bytes());
        }
        h.update(u64::MAX.to_le_bytes());
    }
    hex::encode(h.finalize())
}

/// Hash of the exact factor values.
pub fn factorization_fingerprint(f: &Factorization) -> String {
    let mut h = Sha256::new();
    for v in f.w.iter().chain(f.h.iter()) {
        h.update(v.to_bits().to_le_bytes());
    }
    hex::encode(&h.finalize()[..16])
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

/// NNDSVD-initialized NMF on the full corpus, reduced to its top-`t` terms.
pub fn reference_model(matrix: &DocTermMatrix, k: usize, t: usize, max_iter: usize) -> Result<RankingSet> {
    check_k(k)?;
    let f = nmf(matrix, k, InitStrategy::Nndsvd, &NmfOptions::with_max_iter(max_iter))?;
    extract_ranking_set(&f, t)
}

/// One randomly initialized factorization of one sample.
#[derive(Debug, Clone)]
pub struct SampleRun {
    pub sample: usize,
    pub seed: u64,
    pub factorization: Factorization,
    pub fingerprint: String,
}

/// The reference factorization and all sample factorizations for one `k`.
#[derive(Debug, Clone)]
pub struct KRuns {
    pub k: usize,
    pub reference: Factorization,
    pub runs: Vec<SampleRun>,
}

impl KRuns {
    /// Stability at depth `t`: the reference ranking set and one agreement score per sample.
    pub fn stability(&self, t: usize) -> Result<(RankingSet, Vec<f64>)> {
        let reference = ranking_set_from_topics(&self.reference.w, t)?;
        let scores = self
            .runs
            .iter()
            .map(|r| {
                let rs = ranking_set_from_topics(&r.factorization.w, t)?;
                Ok(agree(&reference, &rs)?.score)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((reference, scores))
    }

    /// Consensus matrix over the sample runs. Documents whose `H` column is all zero
    /// in a run count as unobserved in that run.
    pub fn consensus_matrix(&self, samples: &[DocTermMatrix], n_docs: usize) -> Result<ConsensusMatrix> {
        let mut c = ConsensusMatrix::new(n_docs);
        for run in &self.runs {
            let docs = samples[run.sample].origin();
            let h = &run.factorization.h;
            let mut kept = Vec::with_capacity(docs.len());
            let mut labels = Vec::with_capacity(docs.len());
            for (p, &d) in docs.iter().enumerate() {
                if let Some(topic) = dominant_topic(h, p) {
                    kept.push(d);
                    labels.push(topic);
                }
            }
            if kept.len() < docs.len() {
                warn!(
                    "k={} sample {}: {} documents have no topic weight",
                    self.k,
                    run.sample,
                    docs.len() - kept.len()
                );
            }
            c.add_run(&kept, &ConnectivityMatrix::from_labels(labels))?;
        }
        let missing = c.unobserved_pairs();
        if missing > 0 {
            warn!("k={}: {missing} document pairs never sampled together; their consensus is 0", self.k);
        }
        Ok(c)
    }
}

fn in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start {w} workers: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Fit the reference and every sample model for each `k` in `ks`.
pub fn factorize_all(
    matrix: &DocTermMatrix,
    samples: &[DocTermMatrix],
    ks: &[usize],
    config: &StabilityConfig,
    workers: Option<usize>,
) -> Result<Vec<KRuns>> {
    for &k in ks {
        check_k(k)?;
    }
    let options = config.nmf_options();
    let tasks: Vec<(usize, Option<usize>)> = ks
        .iter()
        .flat_map(|&k| std::iter::once((k, None)).chain((0..samples.len()).map(move |i| (k, Some(i)))))
        .collect();
    info!("running {} factorizations", tasks.len());

    let results: Vec<Result<Factorization>> = in_pool(workers, || {
        tasks
            .par_iter()
            .map(|&(k, sample)| {
                let outcome = match sample {
                    None => nmf(matrix, k, InitStrategy::Nndsvd, &options),
                    Some(i) => nmf(
                        &samples[i],
                        k,
                        InitStrategy::Random { seed: config.run_seed(k, i) },
                        &options,
                    ),
                };
                outcome.map_err(|e| Error::Run {
                    k,
                    sample: sample.map_or(0, |i| i + 1),
                    source: Box::new(e),
                })
            })
            .collect()
    })?;

    let mut results = results.into_iter();
    let mut out = Vec::with_capacity(ks.len());
    for &k in ks {
        let reference = results.next().expect("one task per reference")?;
        let mut runs = Vec::with_capacity(samples.len());
        for i in 0..samples.len() {
            let factorization = results.next().expect("one task per sample")?;
            runs.push(SampleRun {
                sample: i,
                seed: config.run_seed(k, i),
                fingerprint: factorization_fingerprint(&factorization),
                factorization,
            });
        }
        out.push(KRuns { k, reference, runs });
    }
    Ok(out)
}

/// Mean agreement between the reference model for `k` and models fitted to each
/// sample, plus the per-sample scores.
pub fn stability_for_k(
    matrix: &DocTermMatrix,
    samples: &[DocTermMatrix],
    k: usize,
    config: &StabilityConfig,
) -> Result<(f64, Vec<f64>)> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let runs = factorize_all(matrix, samples, &[k], config, None)?.remove(0);
    let (_, scores) = runs.stability(config.t)?;
    Ok((mean(&scores), scores))
}

/// Cophenetic correlation of the consensus matrix built from the same sample
/// factorizations that [`stability_for_k`] uses.
pub fn consensus_for_k(
    matrix: &DocTermMatrix,
    samples: &[DocTermMatrix],
    k: usize,
    config: &StabilityConfig,
    linkage: Linkage,
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    let runs = factorize_all(matrix, samples, &[k], config, None)?.remove(0);
    cophenetic_score(&runs.consensus_matrix(samples, matrix.n_docs())?, linkage)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub terms: usize,
    pub documents: usize,
    pub sha256: String,
}

impl CorpusSummary {
    pub fn of(matrix: &DocTermMatrix) -> Self {
        CorpusSummary {
            terms: matrix.n_terms(),
            documents: matrix.n_docs(),
            sha256: matrix.fingerprint(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KRecord {
    pub k: usize,
    pub stability: f64,
    pub scores: Vec<f64>,
    pub reference_topics: Vec<Vec<String>>,
    pub samples_fingerprint: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub consensus: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub consensus_rescaled: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub config: StabilityConfig,
    pub corpus: CorpusSummary,
    pub records: Vec<KRecord>,
    /// Strict local maxima of the stability curve, highest first.
    pub peaks: Vec<usize>,
    /// Set when the curve is flat and low.
    pub no_clustering_tendency: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub consensus_peaks: Option<Vec<usize>>,
}

impl StabilityReport {
    pub fn curve(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.stability).collect()
    }

    pub fn k_values(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.k).collect()
    }

    pub fn argmax(&self) -> Option<usize> {
        self.records
            .iter()
            .fold(None::<&KRecord>, |best, r| match best {
                Some(b) if b.stability >= r.stability => Some(b),
                _ => Some(r),
            })
            .map(|r| r.k)
    }

    /// Merge consensus scores (one per record) and their rescaled values.
    pub fn attach_consensus(&mut self, scores: &[f64], floor: f64) {
        assert_eq!(scores.len(), self.records.len());
        let rescaled = rescale_consensus(scores, floor);
        for ((r, &s), &z) in self.records.iter_mut().zip(scores).zip(&rescaled) {
            r.consensus = Some(s);
            r.consensus_rescaled = Some(z);
        }
        self.consensus_peaks = Some(find_peaks_in(&self.k_values(), scores));
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// `k,stability,consensus[,consensus_rescaled]` with six decimals.
    pub fn to_csv(&self) -> String {
        let with_consensus = self.records.iter().any(|r| r.consensus.is_some());
        let mut out = String::from(if with_consensus {
            "k,stability,consensus,consensus_rescaled\n"
        } else {
            "k,stability,consensus\n"
        });
        for r in &self.records {
            out.push_str(&format!("{},{:.6},", r.k, r.stability));
            match (r.consensus, r.consensus_rescaled) {
                (Some(c), Some(z)) => out.push_str(&format!("{c:.6},{z:.6}")),
                (Some(c), None) => out.push_str(&format!("{c:.6},")),
                _ if with_consensus => out.push(','),
                _ => {}
            }
            out.push('\n');
        }
        out
    }
}

/// Strict local maxima of `values` over `ks`, ordered by descending value (then k).
///
/// Interior points must exceed both neighbours, endpoints their one neighbour; a
/// single point is its own peak. A constant curve has no peaks.
pub fn find_peaks_in(ks: &[usize], values: &[f64]) -> Vec<usize> {
    assert_eq!(ks.len(), values.len());
    let n = values.len();
    if n == 1 {
        return ks.to_vec();
    }
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&i| {
            let left = i == 0 || values[i] > values[i - 1];
            let right = i + 1 == n || values[i] > values[i + 1];
            left && right
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(ks[a].cmp(&ks[b])));
    peaks.into_iter().map(|i| ks[i]).collect()
}

pub fn find_peaks(report: &StabilityReport) -> Vec<usize> {
    find_peaks_in(&report.k_values(), &report.curve())
}

/// Flat (range below `flat_range`) and low (maximum below `low_stability`).
pub fn no_clustering_tendency(values: &[f64], config: &StabilityConfig) -> bool {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min < config.flat_range && max < config.low_stability
}

/// Stability curve at one depth, with the reference ranking sets.
#[derive(Debug, Clone)]
pub struct Curve {
    pub t: usize,
    pub points: Vec<(usize, f64, Vec<f64>, RankingSet)>,
}

impl Curve {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }
}

/// Samples plus every factorization of a protocol run. Rankings at any depth and
/// the consensus baseline are derived from the same cached factors.
#[derive(Debug, Clone)]
pub struct Analysis {
    config: StabilityConfig,
    corpus: CorpusSummary,
    vocabulary: Arc<Vocabulary>,
    samples: Vec<DocTermMatrix>,
    samples_fingerprint: String,
    runs: Vec<KRuns>,
}

impl Analysis {
    pub fn run(matrix: &DocTermMatrix, config: &StabilityConfig, workers: Option<usize>) -> Result<Self> {
        config.validate()?;
        let samples = generate_samples(matrix, config.tau, config.beta, config.seed)?;
        let samples_fingerprint = samples_fingerprint(&samples);
        let runs = factorize_all(matrix, &samples, &config.k_values(), config, workers)?;
        Ok(Analysis {
            config: config.clone(),
            corpus: CorpusSummary::of(matrix),
            vocabulary: Arc::clone(matrix.vocabulary()),
            samples,
            samples_fingerprint,
            runs,
        })
    }

    pub fn config(&self) -> &StabilityConfig {
        &self.config
    }

    pub fn samples(&self) -> &[DocTermMatrix] {
        &self.samples
    }

    pub fn runs(&self) -> &[KRuns] {
        &self.runs
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn curve(&self, t: usize) -> Result<Curve> {
        let points = self
            .runs
            .par_iter()
            .map(|kr| {
                let (reference, scores) = kr.stability(t)?;
                Ok((kr.k, mean(&scores), scores, reference))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Curve { t, points })
    }

    pub fn consensus_matrix(&self, k: usize) -> Result<ConsensusMatrix> {
        let kr = self
            .runs
            .iter()
            .find(|r| r.k == k)
            .ok_or_else(|| Error::InvalidArgument(format!("k={k} was not analyzed")))?;
        kr.consensus_matrix(&self.samples, self.corpus.documents)
    }

    /// Cophenetic consensus score for every analyzed `k`.
    pub fn consensus_scores(&self, linkage: Linkage) -> Result<Vec<f64>> {
        self.runs
            .iter()
            .map(|kr| {
                let c = kr.consensus_matrix(&self.samples, self.corpus.documents)?;
                cophenetic_score(&c, linkage)
            })
            .collect()
    }

    /// Report at depth `t`.
    pub fn report_at(&self, t: usize) -> Result<StabilityReport> {
        let curve = self.curve(t)?;
        let mut config = self.config.clone();
        config.t = t;
        let values = curve.values();
        let records = curve
            .points
            .into_iter()
            .map(|(k, stability, scores, reference)| KRecord {
                k,
                stability,
                scores,
                reference_topics: reference.terms(&self.vocabulary),
                samples_fingerprint: self.samples_fingerprint.clone(),
                consensus: None,
                consensus_rescaled: None,
            })
            .collect::<Vec<_>>();
        let ks: Vec<usize> = records.iter().map(|r| r.k).collect();
        Ok(StabilityReport {
            peaks: find_peaks_in(&ks, &values),
            no_clustering_tendency: no_clustering_tendency(&values, &config),
            config,
            corpus: self.corpus.clone(),
            records,
            consensus_peaks: None,
        })
    }

    pub fn report(&self) -> Result<StabilityReport> {
        self.report_at(self.config.t)
    }
}

/// Run the whole protocol over `[k_min, k_max]`.
pub fn run_protocol(matrix: &DocTermMatrix, config: &StabilityConfig) -> Result<StabilityReport> {
    Analysis::run(matrix, config, None)?.report()
}
