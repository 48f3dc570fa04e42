//! Random corpora: structureless ones for the negative control, and corpora with
//! planted topics for checking that the protocol recovers them.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{apply_tfidf, DocTermMatrix, Vocabulary, Weighting};
use crate::error::{Error, Result};
use crate::seed;

pub const MIN_DOC_LENGTH: usize = 50;
pub const MAX_DOC_LENGTH: usize = 150;

/// Name of term `i` (0-based) in a synthetic vocabulary of `n_terms` terms.
pub fn term_name(i: usize) -> String {
    format!("w{:05}", i + 1)
}

/// Raw counts: each document draws a length uniform in `[50, 150]`, then that many
/// terms uniformly from the vocabulary. Terms that never occur are dropped.
pub fn synthetic_counts(n_docs: usize, n_terms: usize, seed: u64) -> Result<DocTermMatrix> {
    if n_docs == 0 || n_terms == 0 {
        return Err(Error::InvalidArgument("docs and terms must be at least 1".into()));
    }
    let mut rng = seed::rng(seed);
    let columns = (0..n_docs)
        .map(|_| {
            let len = rng.gen_range(MIN_DOC_LENGTH..=MAX_DOC_LENGTH);
            let mut counts = vec![0u32; n_terms];
            for _ in 0..len {
                counts[rng.gen_range(0..n_terms)] += 1;
            }
            counts
                .into_iter()
                .enumerate()
                .filter(|&(_, c)| c > 0)
                .map(|(i, c)| (i, f64::from(c)))
                .collect()
        })
        .collect();
    let vocabulary = Arc::new(Vocabulary::new((0..n_terms).map(term_name).collect())?);
    let ids = (1..=n_docs).map(|i| i.to_string()).collect();
    DocTermMatrix::from_columns(vocabulary, ids, columns, Weighting::Counts)?.prune_empty_terms()
}

/// Synthetic counts passed through the usual TF-IDF weighting and normalization.
pub fn synthetic_corpus(n_docs: usize, n_terms: usize, seed: u64) -> Result<DocTermMatrix> {
    apply_tfidf(&synthetic_counts(n_docs, n_terms, seed)?)?.prune_empty_terms()
}

/// A corpus with known topics. Document `i` belongs to topic `i % topics`; each of
/// its tokens comes from that topic's own block of terms with probability `purity`,
/// otherwise from a shared background block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedTopics {
    pub docs: usize,
    pub topics: usize,
    pub terms_per_topic: usize,
    pub background_terms: usize,
    pub purity: f64,
    pub seed: u64,
}

impl Default for PlantedTopics {
    fn default() -> Self {
        PlantedTopics {
            docs: 300,
            topics: 5,
            terms_per_topic: 40,
            background_terms: 200,
            purity: 0.7,
            seed: 0,
        }
    }
}

impl PlantedTopics {
    /// Raw counts and the planted topic of every document. Topic `a` owns terms
    /// `t<a>_001 ..`, background terms are `bg_0001 ..`.
    pub fn counts(&self) -> Result<(DocTermMatrix, Vec<usize>)> {
        if self.docs == 0 || self.topics == 0 || self.terms_per_topic == 0 {
            return Err(Error::InvalidArgument("docs, topics and terms_per_topic must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.purity) {
            return Err(Error::InvalidArgument(format!("purity {} outside [0, 1]", self.purity)));
        }
        let mut terms = Vec::with_capacity(self.topics * self.terms_per_topic + self.background_terms);
        for a in 0..self.topics {
            terms.extend((0..self.terms_per_topic).map(|j| format!("t{}_{:03}", a + 1, j + 1)));
        }
        terms.extend((0..self.background_terms).map(|j| format!("bg_{:04}", j + 1)));
        let n_terms = terms.len();
        let background = self.topics * self.terms_per_topic;

        let mut rng = seed::rng(self.seed);
        let labels: Vec<usize> = (0..self.docs).map(|i| i % self.topics).collect();
        let columns = labels
            .iter()
            .map(|&topic| {
                let len = rng.gen_range(MIN_DOC_LENGTH..=MAX_DOC_LENGTH);
                let mut counts = vec![0u32; n_terms];
                for _ in 0..len {
                    let term = if self.background_terms == 0 || rng.gen::<f64>() < self.purity {
                        topic * self.terms_per_topic + rng.gen_range(0..self.terms_per_topic)
                    } else {
                        background + rng.gen_range(0..self.background_terms)
                    };
                    counts[term] += 1;
                }
                counts
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, c)| c > 0)
                    .map(|(i, c)| (i, f64::from(c)))
                    .collect()
            })
            .collect();
        let vocabulary = Arc::new(Vocabulary::new(terms)?);
        let ids = (1..=self.docs).map(|i| i.to_string()).collect();
        let m = DocTermMatrix::from_columns(vocabulary, ids, columns, Weighting::Counts)?.prune_empty_terms()?;
        Ok((m, labels))
    }

    /// TF-IDF weighted, normalized corpus and the planted labels.
    pub fn corpus(&self) -> Result<(DocTermMatrix, Vec<usize>)> {
        let (counts, labels) = self.counts()?;
        Ok((apply_tfidf(&counts)?.prune_empty_terms()?, labels))
    }
}
