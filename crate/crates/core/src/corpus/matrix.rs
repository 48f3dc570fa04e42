use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Ordered, duplicate-free list of lowercase terms with its inverse index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn new(terms: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(terms.len());
        for (i, term) in terms.iter().enumerate() {
            if term.is_empty() {
                return Err(Error::Data(format!("empty term at position {i}")));
            }
            if term.chars().any(char::is_uppercase) {
                return Err(Error::Data(format!("term {term:?} is not lowercase")));
            }
            if index.insert(term.clone(), i).is_some() {
                return Err(Error::Data(format!("duplicate term {term:?}")));
            }
        }
        Ok(Vocabulary { terms, index })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }
}

/// What the stored weights currently represent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// Raw term counts.
    Counts,
    /// Log TF-IDF with unit-length document columns.
    Normalized,
    /// Some other non-negative weighting loaded from disk.
    Weighted,
}

/// Sparse non-negative term × document matrix stored by document column.
///
/// Only strictly positive weights are stored. Row indices inside a column are
/// strictly increasing. The vocabulary is shared between a matrix and every
/// column sample taken from it.
#[derive(Debug, Clone, PartialEq)]
pub struct DocTermMatrix {
    vocabulary: Arc<Vocabulary>,
    doc_ids: Vec<String>,
    origin: Vec<usize>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
    weighting: Weighting,
}

impl DocTermMatrix {
    /// Build from per-document `(term index, weight)` lists. Zero weights are dropped;
    /// entries in a column may come in any order but must not repeat a term.
    pub fn from_columns(
        vocabulary: Arc<Vocabulary>,
        doc_ids: Vec<String>,
        columns: Vec<Vec<(usize, f64)>>,
        weighting: Weighting,
    ) -> Result<Self> {
        if doc_ids.len() != columns.len() {
            return Err(Error::Data(format!(
                "{} document ids for {} columns",
                doc_ids.len(),
                columns.len()
            )));
        }
        let mut seen = HashMap::with_capacity(doc_ids.len());
        for id in &doc_ids {
            if id.is_empty() {
                return Err(Error::Data("empty document id".into()));
            }
            if seen.insert(id.as_str(), ()).is_some() {
                return Err(Error::Data(format!("duplicate document id {id:?}")));
            }
        }
        let m = vocabulary.len();
        let nnz = columns.iter().map(Vec::len).sum();
        let mut col_ptr = Vec::with_capacity(columns.len() + 1);
        let mut row_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        col_ptr.push(0);
        for (j, mut col) in columns.into_iter().enumerate() {
            col.sort_unstable_by_key(|&(i, _)| i);
            for (pos, &(i, v)) in col.iter().enumerate() {
                if i >= m {
                    return Err(Error::Data(format!(
                        "term index {i} out of range (m={m}) in column {j}"
                    )));
                }
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Data(format!(
                        "invalid weight {v} at ({i}, {j})"
                    )));
                }
                if pos > 0 && col[pos - 1].0 == i {
                    return Err(Error::Data(format!("duplicate entry ({i}, {j})")));
                }
                if v > 0.0 {
                    row_idx.push(i);
                    values.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        let n = doc_ids.len();
        Ok(DocTermMatrix {
            vocabulary,
            doc_ids,
            origin: (0..n).collect(),
            col_ptr,
            row_idx,
            values,
            weighting,
        })
    }

    pub fn vocabulary(&self) -> &Arc<Vocabulary> {
        &self.vocabulary
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    /// Column positions of these documents in the matrix this one was sampled from
    /// (transitively, the full corpus). Identity for an unsampled matrix.
    pub fn origin(&self) -> &[usize] {
        &self.origin
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn n_terms(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn n_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Row indices and weights of document column `j`.
    pub fn column(&self, j: usize) -> (&[usize], &[f64]) {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.row_idx[range.clone()], &self.values[range])
    }

    pub fn get(&self, term: usize, doc: usize) -> f64 {
        let (rows, vals) = self.column(doc);
        rows.binary_search(&term).map_or(0.0, |p| vals[p])
    }

    pub fn column_norm(&self, j: usize) -> f64 {
        self.column(j).1.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    /// Number of documents each term occurs in.
    pub fn document_frequencies(&self) -> Vec<usize> {
        let mut df = vec![0usize; self.n_terms()];
        for &i in &self.row_idx {
            df[i] += 1;
        }
        df
    }

    /// `y = A x` for a dense document-space vector `x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n_terms()];
        for (j, &xj) in x.iter().enumerate() {
            let (rows, vals) = self.column(j);
            for (&i, &a) in rows.iter().zip(vals) {
                y[i] += a * xj;
            }
        }
        y
    }

    /// `y = Aᵀ x` for a dense term-space vector `x`.
    pub fn tmul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n_docs())
            .map(|j| {
                let (rows, vals) = self.column(j);
                rows.iter().zip(vals).map(|(&i, &a)| a * x[i]).sum()
            })
            .collect()
    }

    pub fn to_dense(&self) -> ndarray::Array2<f64> {
        let mut out = ndarray::Array2::zeros((self.n_terms(), self.n_docs()));
        for j in 0..self.n_docs() {
            let (rows, vals) = self.column(j);
            for (&i, &a) in rows.iter().zip(vals) {
                out[[i, j]] = a;
            }
        }
        out
    }

    /// Keep the listed columns, in the given order. The vocabulary is shared unchanged.
    pub fn select_columns(&self, columns: &[usize]) -> DocTermMatrix {
        let mut col_ptr = Vec::with_capacity(columns.len() + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for &j in columns {
            let (rows, vals) = self.column(j);
            row_idx.extend_from_slice(rows);
            values.extend_from_slice(vals);
            col_ptr.push(row_idx.len());
        }
        DocTermMatrix {
            vocabulary: Arc::clone(&self.vocabulary),
            doc_ids: columns.iter().map(|&j| self.doc_ids[j].clone()).collect(),
            origin: columns.iter().map(|&j| self.origin[j]).collect(),
            col_ptr,
            row_idx,
            values,
            weighting: self.weighting,
        }
    }

    /// Drop vocabulary terms with no stored entries, re-indexing the remaining rows.
    pub fn prune_empty_terms(&self) -> Result<DocTermMatrix> {
        let df = self.document_frequencies();
        let mut remap = vec![usize::MAX; self.n_terms()];
        let mut terms = Vec::new();
        for (i, &d) in df.iter().enumerate() {
            if d > 0 {
                remap[i] = terms.len();
                terms.push(self.vocabulary.term(i).to_owned());
            }
        }
        if terms.is_empty() {
            return Err(Error::EmptyVocabulary);
        }
        let mut out = self.clone();
        out.vocabulary = Arc::new(Vocabulary::new(terms)?);
        for i in &mut out.row_idx {
            *i = remap[*i];
        }
        Ok(out)
    }

    pub(crate) fn with_values(&self, col_ptr: Vec<usize>, row_idx: Vec<usize>, values: Vec<f64>, weighting: Weighting) -> DocTermMatrix {
        DocTermMatrix {
            vocabulary: Arc::clone(&self.vocabulary),
            doc_ids: self.doc_ids.clone(),
            origin: self.origin.clone(),
            col_ptr,
            row_idx,
            values,
            weighting,
        }
    }

    pub(crate) fn set_weighting(&mut self, weighting: Weighting) {
        self.weighting = weighting;
    }

    /// SHA-256 over terms, document ids and the exact stored weights.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for t in self.vocabulary.terms() {
            h.update(t.as_bytes());
            h.update([0u8]);
        }
        h.update([1u8]);
        for d in &self.doc_ids {
            h.update(d.as_bytes());
            h.update([0u8]);
        }
        for p in &self.col_ptr {
            h.update((*p as u64).to_le_bytes());
        }
        for i in &self.row_idx {
            h.update((*i as u64).to_le_bytes());
        }
        for v in &self.values {
            h.update(v.to_bits().to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}
