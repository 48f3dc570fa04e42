//! Top-weighted similarity between ranked term lists.
//!
//! The Average Jaccard score averages the Jaccard index of the two list heads at
//! every depth `1..=t`. An item at rank `r` takes part in `t - r + 1` of the `t`
//! head comparisons, so disagreement near the top costs more than disagreement in
//! the tail. Lists may contain different items (indefinite rankings) and may be
//! shorter than `t`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A ranked list of distinct term indices, best first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankedList(Vec<usize>);

impl RankedList {
    pub fn new(items: Vec<usize>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(items.len());
        if let Some(dup) = items.iter().find(|&&i| !seen.insert(i)) {
            return Err(Error::InvalidArgument(format!(
                "term {dup} appears twice in a ranked list"
            )));
        }
        Ok(RankedList(items))
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The first `depth` items, or the whole list if it is shorter.
    pub fn head(&self, depth: usize) -> &[usize] {
        &self.0[..depth.min(self.0.len())]
    }

    pub fn truncated(&self, depth: usize) -> RankedList {
        RankedList(self.head(depth).to_vec())
    }
}

impl TryFrom<Vec<usize>> for RankedList {
    type Error = Error;

    fn try_from(items: Vec<usize>) -> Result<Self> {
        RankedList::new(items)
    }
}

/// Jaccard index of the two heads at depth `d`. Two empty heads score 0.
pub fn jaccard_at_depth(r1: &RankedList, r2: &RankedList, d: usize) -> f64 {
    assert!(d >= 1, "depth must be at least 1");
    let h1: HashSet<usize> = r1.head(d).iter().copied().collect();
    let h2 = r2.head(d);
    let inter = h2.iter().filter(|i| h1.contains(i)).count();
    let union = h1.len() + h2.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Per-depth Jaccard scores `γ_1..γ_t`, computed incrementally in O(t).
pub fn jaccard_profile(r1: &RankedList, r2: &RankedList, t: usize) -> Vec<f64> {
    let mut seen1 = HashSet::with_capacity(t);
    let mut seen2 = HashSet::with_capacity(t);
    let mut inter = 0usize;
    let mut out = Vec::with_capacity(t);
    for d in 1..=t {
        if let Some(&x) = r1.items().get(d - 1) {
            seen1.insert(x);
            if seen2.contains(&x) {
                inter += 1;
            }
        }
        if let Some(&y) = r2.items().get(d - 1) {
            seen2.insert(y);
            if seen1.contains(&y) {
                inter += 1;
            }
        }
        let union = seen1.len() + seen2.len() - inter;
        out.push(if union == 0 { 0.0 } else { inter as f64 / union as f64 });
    }
    out
}

/// Average Jaccard at depths `1..=t`, reported after each depth: entry `d-1` is the
/// mean of `γ_1..γ_d`.
pub fn running_average_jaccard(r1: &RankedList, r2: &RankedList, t: usize) -> Vec<f64> {
    let mut sum = 0.0;
    jaccard_profile(r1, r2, t)
        .into_iter()
        .enumerate()
        .map(|(i, g)| {
            sum += g;
            sum / (i + 1) as f64
        })
        .collect()
}

/// Average Jaccard similarity `(1/t) Σ_{d=1..t} γ_d` in `[0, 1]`.
///
/// The divisor is always `t`; lists shorter than `t` reuse their full contents as
/// the head at deeper levels.
pub fn average_jaccard(r1: &RankedList, r2: &RankedList, t: usize) -> f64 {
    assert!(t >= 1, "depth must be at least 1");
    jaccard_profile(r1, r2, t).iter().sum::<f64>() / t as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(items: &[usize]) -> RankedList {
        RankedList::new(items.to_vec()).unwrap()
    }

    #[test]
    fn duplicates_rejected() {
        assert!(RankedList::new(vec![1, 2, 1]).is_err());
    }

    #[test]
    fn swapped_pair() {
        // γ1 = 0, γ2 = 1
        assert_eq!(average_jaccard(&list(&[0, 1]), &list(&[1, 0]), 2), 0.5);
    }

    #[test]
    fn identical_lists() {
        let r = list(&[4, 2, 9]);
        for t in 1..6 {
            assert_eq!(average_jaccard(&r, &r, t), 1.0);
            assert_eq!(jaccard_at_depth(&r, &r, t), 1.0);
        }
    }

    #[test]
    fn empty_lists_score_zero() {
        let e = RankedList::default();
        assert_eq!(jaccard_at_depth(&e, &e, 3), 0.0);
        assert_eq!(average_jaccard(&e, &e, 3), 0.0);
        assert_eq!(average_jaccard(&e, &list(&[1]), 3), 0.0);
    }

    #[test]
    fn short_lists_keep_divisor_t() {
        // [a] vs [a] at t=3: every depth compares {a} with {a}.
        assert_eq!(average_jaccard(&list(&[7]), &list(&[7]), 3), 1.0);
        // [a] vs [a, b] at t=2: γ1 = 1, γ2 = 1/2.
        assert_eq!(average_jaccard(&list(&[7]), &list(&[7, 8]), 2), 0.75);
    }

    #[test]
    fn profile_matches_direct_evaluation() {
        let a = list(&[1, 2, 3, 4, 5]);
        let b = list(&[3, 1, 9, 5]);
        let prof = jaccard_profile(&a, &b, 6);
        for (d, g) in prof.iter().enumerate() {
            assert_eq!(*g, jaccard_at_depth(&a, &b, d + 1));
        }
    }
}
