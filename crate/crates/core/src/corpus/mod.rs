//! Corpus ingestion: tokenization, vocabulary filtering, log TF-IDF weighting
//! with unit-length documents, and document subsampling.

mod io;
mod matrix;
mod tokenize;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rand::seq::index;

pub use self::io::{
    load_corpus, read_raw_corpus, read_stopwords, save_corpus, CorpusPaths,
};
pub use self::matrix::{DocTermMatrix, Vocabulary, Weighting};
pub use self::tokenize::tokenize;
use crate::error::{Error, Result};
use crate::seed;

/// Minimum document frequency used when none is given.
pub const DEFAULT_MIN_DF: usize = 20;

const ENGLISH_STOPWORDS: &str = include_str!("../../data/stopwords_en.txt");

/// The bundled English stop-word list.
pub fn english_stopwords() -> HashSet<String> {
    ENGLISH_STOPWORDS
        .lines()
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Ordered `(document id, text)` pairs. Ids are unique and non-empty.
#[derive(Debug, Clone, Default)]
pub struct RawCorpus {
    documents: Vec<(String, String)>,
}

impl RawCorpus {
    pub fn new(documents: Vec<(String, String)>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(documents.len());
        for (id, _) in &documents {
            if id.is_empty() {
                return Err(Error::Data("empty document id".into()));
            }
            if !seen.insert(id.as_str()) {
                return Err(Error::Data(format!("duplicate document id {id:?}")));
            }
        }
        Ok(RawCorpus { documents })
    }

    pub fn documents(&self) -> &[(String, String)] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

/// Count terms per document, keeping terms that are not stop words and occur in
/// at least `min_df` documents. The vocabulary is sorted lexicographically.
pub fn build_matrix(
    corpus: &RawCorpus,
    stopwords: &HashSet<String>,
    min_df: usize,
) -> Result<DocTermMatrix> {
    if min_df == 0 {
        return Err(Error::InvalidArgument("min_df must be at least 1".into()));
    }
    let counts: Vec<HashMap<String, u32>> = corpus
        .documents()
        .iter()
        .map(|(_, text)| {
            let mut tf = HashMap::new();
            for tok in tokenize(text) {
                if !stopwords.contains(&tok) {
                    *tf.entry(tok).or_insert(0) += 1;
                }
            }
            tf
        })
        .collect();

    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in &counts {
        for term in doc.keys() {
            *df.entry(term.as_str()).or_insert(0) += 1;
        }
    }
    let terms: Vec<String> = df
        .into_iter()
        .filter(|&(_, d)| d >= min_df)
        .map(|(t, _)| t.to_owned())
        .collect();
    if terms.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let vocabulary = Arc::new(Vocabulary::new(terms)?);
    let columns = counts
        .iter()
        .map(|doc| {
            doc.iter()
                .filter_map(|(t, &c)| vocabulary.index_of(t).map(|i| (i, f64::from(c))))
                .collect()
        })
        .collect();
    let ids = corpus.documents().iter().map(|(id, _)| id.clone()).collect();
    DocTermMatrix::from_columns(vocabulary, ids, columns, Weighting::Counts)
}

/// Replace raw counts with `(1 + ln tf) · ln(n / df)` and scale each document to unit
/// L2 norm. Terms present in every document get weight zero and are not stored.
pub fn apply_tfidf(matrix: &DocTermMatrix) -> Result<DocTermMatrix> {
    match matrix.weighting() {
        Weighting::Counts => {}
        _ => return Err(Error::AlreadyNormalized),
    }
    let n = matrix.n_docs();
    let df = matrix.document_frequencies();
    let idf: Vec<f64> = df
        .iter()
        .map(|&d| if d == 0 || d == n { 0.0 } else { (n as f64 / d as f64).ln() })
        .collect();

    let mut col_ptr = Vec::with_capacity(n + 1);
    let mut row_idx = Vec::with_capacity(matrix.nnz());
    let mut values = Vec::with_capacity(matrix.nnz());
    col_ptr.push(0);
    for j in 0..n {
        let start = values.len();
        let (rows, counts) = matrix.column(j);
        for (&i, &c) in rows.iter().zip(counts) {
            let w = (1.0 + c.ln()) * idf[i];
            if w > 0.0 {
                row_idx.push(i);
                values.push(w);
            }
        }
        let norm = values[start..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            values[start..].iter_mut().for_each(|v| *v /= norm);
        }
        col_ptr.push(values.len());
    }
    Ok(matrix.with_values(col_ptr, row_idx, values, Weighting::Normalized))
}

/// Number of documents kept by a sample of `ratio · n` documents.
pub fn sample_size(n: usize, ratio: f64) -> usize {
    // Guard against 0.29 * 100 = 28.999...
    (ratio * n as f64 + 1e-9).floor() as usize
}

/// Draw `floor(ratio · n)` distinct documents without replacement. The kept columns
/// stay in their original relative order and the full vocabulary is retained.
pub fn sample_columns(matrix: &DocTermMatrix, ratio: f64, seed: u64) -> Result<DocTermMatrix> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sampling ratio {ratio} outside (0, 1]"
        )));
    }
    let n = matrix.n_docs();
    let size = sample_size(n, ratio);
    if size == 0 {
        return Err(Error::InvalidArgument(format!(
            "sampling ratio {ratio} keeps no documents out of {n}"
        )));
    }
    let mut picked = index::sample(&mut seed::rng(seed), n, size).into_vec();
    picked.sort_unstable();
    Ok(matrix.select_columns(&picked))
}
