use ndarray::{Array2, ArrayView1};

use super::svd::truncated_svd;
use crate::corpus::DocTermMatrix;
use crate::error::Result;

fn split(x: ArrayView1<'_, f64>) -> (Vec<f64>, Vec<f64>) {
    x.iter().map(|&v| (v.max(0.0), (-v).max(0.0))).unzip()
}

fn l2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// NNDSVD starting point `(W₀ m×k, H₀ k×n)`.
///
/// The leading triplet contributes `√σ₁ |u₁|` and `√σ₁ |v₁|`. Every further
/// triplet is split into positive and negative parts; the pair `(u±, v±)` with
/// the larger product of norms is kept, normalized, and scaled by
/// `√(σ_j ‖u±‖ ‖v±‖)`. Exact zeros are kept.
pub fn nndsvd_init(matrix: &DocTermMatrix, k: usize) -> Result<(Array2<f64>, Array2<f64>)> {
    let svd = truncated_svd(matrix, k)?;
    let (m, n) = (matrix.n_terms(), matrix.n_docs());
    let mut w = Array2::zeros((m, k));
    let mut h = Array2::zeros((k, n));

    let root = svd.s[0].sqrt();
    for i in 0..m {
        w[[i, 0]] = root * svd.u[[i, 0]].abs();
    }
    for j in 0..n {
        h[[0, j]] = root * svd.v[[j, 0]].abs();
    }

    for c in 1..k {
        let (xp, xn) = split(svd.u.column(c));
        let (yp, yn) = split(svd.v.column(c));
        let (nxp, nxn, nyp, nyn) = (l2(&xp), l2(&xn), l2(&yp), l2(&yn));
        let (mp, mn) = (nxp * nyp, nxn * nyn);
        let (x, y, nx, ny, mass) = if mp > mn {
            (xp, yp, nxp, nyp, mp)
        } else {
            (xn, yn, nxn, nyn, mn)
        };
        if mass == 0.0 {
            continue;
        }
        let lambda = (svd.s[c] * mass).sqrt();
        for i in 0..m {
            w[[i, c]] = lambda * x[i] / nx;
        }
        for j in 0..n {
            h[[c, j]] = lambda * y[j] / ny;
        }
    }
    Ok((w, h))
}
