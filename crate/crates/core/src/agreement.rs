//! Agreement between two k-topic models: Average Jaccard between every pair of
//! topics, then the best one-to-one matching of topics.

use ndarray::Array2;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factorization::RankingSet;
use crate::hungarian::max_weight_matching;
use crate::ranking::average_jaccard;

#[derive(Debug, Clone, PartialEq)]
pub struct AgreementResult {
    /// `similarity[[i, j]]` = AJ between topic `i` of the first model and topic `j` of the second.
    pub similarity: Array2<f64>,
    /// `permutation[i]` is the topic of the second model matched to topic `i` (0-based).
    pub permutation: Vec<usize>,
    pub score: f64,
}

impl Serialize for AgreementResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            matrix: Vec<Vec<f64>>,
            /// 1-based `[i, π(i)]` pairs.
            permutation: Vec<[usize; 2]>,
            score: f64,
        }
        Repr {
            matrix: self.similarity.rows().into_iter().map(|r| r.to_vec()).collect(),
            permutation: self
                .permutation
                .iter()
                .enumerate()
                .map(|(i, &j)| [i + 1, j + 1])
                .collect(),
            score: self.score,
        }
        .serialize(serializer)
    }
}

/// `k × k` matrix of Average Jaccard scores at the shared depth.
pub fn similarity_matrix(sx: &RankingSet, sy: &RankingSet) -> Result<Array2<f64>> {
    if sx.k() != sy.k() {
        return Err(Error::InvalidArgument(format!(
            "cannot compare a {}-topic model with a {}-topic model",
            sx.k(),
            sy.k()
        )));
    }
    if sx.depth() != sy.depth() {
        return Err(Error::InvalidArgument(format!(
            "ranking depths differ: {} vs {}",
            sx.depth(),
            sy.depth()
        )));
    }
    let t = sx.depth();
    let k = sx.k();
    Ok(Array2::from_shape_fn((k, k), |(i, j)| {
        average_jaccard(&sx.topics()[i], &sy.topics()[j], t)
    }))
}

/// Permutation maximizing total similarity (Hungarian method on `1 − M`), ties
/// broken towards the lexicographically smallest permutation.
pub fn best_match(m: &Array2<f64>) -> Vec<usize> {
    assert_eq!(m.nrows(), m.ncols(), "similarity matrix must be square");
    let cost: Vec<Vec<f64>> = m.rows().into_iter().map(|r| r.to_vec()).collect();
    max_weight_matching(&cost)
}

/// Mean similarity of optimally matched topics, in `[0, 1]`.
pub fn agree(sx: &RankingSet, sy: &RankingSet) -> Result<AgreementResult> {
    let similarity = similarity_matrix(sx, sy)?;
    let permutation = best_match(&similarity);
    let k = permutation.len();
    let score = if k == 0 {
        0.0
    } else {
        permutation
            .iter()
            .enumerate()
            .map(|(i, &j)| similarity[[i, j]])
            .sum::<f64>()
            / k as f64
    };
    Ok(AgreementResult {
        similarity,
        permutation,
        score,
    })
}
