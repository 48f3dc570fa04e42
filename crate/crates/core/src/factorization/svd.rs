//! Leading singular triplets of a sparse matrix by Golub–Kahan–Lanczos
//! bidiagonalization with full reorthogonalization.
//!
//! The start vector is the normalized all-ones vector and every choice made
//! during the iteration is fixed, so repeated calls return bitwise-identical
//! results. The Krylov dimension starts at `max(2k + 20, 30)` and doubles until
//! the Ritz residuals of the leading `k` triplets are below `1e-9 σ₁`; at full
//! dimension the bidiagonalization is exact.

use nalgebra::{DMatrix, SVD};
use ndarray::Array2;

use crate::corpus::DocTermMatrix;
use crate::error::{Error, Result};

const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSvd {
    /// Left singular vectors as columns, `m × k`.
    pub u: Array2<f64>,
    /// Singular values, descending.
    pub s: Vec<f64>,
    /// Right singular vectors as columns, `n × k`.
    pub v: Array2<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Two passes of classical Gram–Schmidt against `basis`.
fn reorthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(w, b);
            axpy(w, -c, b);
        }
    }
}

/// Deterministic replacement direction after a breakdown: the first standard
/// basis vector (scanning from `cursor`) with a substantial component outside `basis`.
fn fresh_direction(dim: usize, basis: &[Vec<f64>], cursor: &mut usize) -> Option<Vec<f64>> {
    while *cursor < dim {
        let mut e = vec![0.0; dim];
        e[*cursor] = 1.0;
        *cursor += 1;
        reorthogonalize(&mut e, basis);
        let nrm = norm(&e);
        if nrm > 0.5 {
            e.iter_mut().for_each(|x| *x /= nrm);
            return Some(e);
        }
    }
    None
}

struct Bidiagonalization {
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    residual: f64,
}

fn bidiagonalize(a: &DocTermMatrix, steps: usize) -> Bidiagonalization {
    let (m, n) = (a.n_terms(), a.n_docs());
    let scale = a.frobenius_sq().sqrt().max(f64::MIN_POSITIVE);
    let breakdown = 1e-12 * scale;
    let mut u_cursor = 0;
    let mut v_cursor = 0;

    let mut v = vec![vec![1.0 / (n as f64).sqrt(); n]];
    let mut u: Vec<Vec<f64>> = Vec::with_capacity(steps);
    let mut alpha = Vec::with_capacity(steps);
    let mut beta: Vec<f64> = Vec::with_capacity(steps);
    let mut residual = 0.0;

    for j in 0..steps {
        let mut w = a.mul_vec(&v[j]);
        if j > 0 {
            axpy(&mut w, -beta[j - 1], &u[j - 1]);
        }
        reorthogonalize(&mut w, &u);
        let mut a_j = norm(&w);
        if a_j <= breakdown {
            match fresh_direction(m, &u, &mut u_cursor) {
                Some(f) => {
                    w = f;
                    a_j = 0.0;
                }
                None => break,
            }
        } else {
            w.iter_mut().for_each(|x| *x /= a_j);
        }
        u.push(w);
        alpha.push(a_j);

        let mut z = a.tmul_vec(&u[j]);
        axpy(&mut z, -a_j, &v[j]);
        reorthogonalize(&mut z, &v);
        let b_j = norm(&z);
        if j + 1 == steps {
            residual = b_j;
            break;
        }
        if b_j <= breakdown {
            match fresh_direction(n, &v, &mut v_cursor) {
                Some(f) => {
                    v.push(f);
                    beta.push(0.0);
                }
                None => break,
            }
        } else {
            z.iter_mut().for_each(|x| *x /= b_j);
            v.push(z);
            beta.push(b_j);
        }
    }
    v.truncate(u.len());
    Bidiagonalization {
        u,
        v,
        alpha,
        beta,
        residual,
    }
}

/// The `k` largest singular triplets of `a`, with the sign of each pair fixed so
/// that the largest-magnitude entry of the left vector is positive.
pub fn truncated_svd(a: &DocTermMatrix, k: usize) -> Result<TruncatedSvd> {
    let (m, n) = (a.n_terms(), a.n_docs());
    let full = m.min(n);
    if k == 0 || k > full {
        return Err(Error::RankOutOfRange { k, rows: m, cols: n });
    }
    let mut steps = full.min((2 * k + 20).max(30));
    loop {
        let bd = bidiagonalize(a, steps);
        let l = bd.alpha.len();
        if l < k {
            return Err(Error::Numerical(format!(
                "Krylov space exhausted at dimension {l} < k={k}"
            )));
        }
        let b = DMatrix::from_fn(l, l, |i, j| {
            if i == j {
                bd.alpha[i]
            } else if j == i + 1 {
                bd.beta[i]
            } else {
                0.0
            }
        });
        let svd = SVD::try_new_unordered(b, true, true, f64::EPSILON, 100_000)
            .ok_or_else(|| Error::Numerical("SVD of the bidiagonal factor did not converge".into()))?;
        let (p, qt) = match (svd.u, svd.v_t) {
            (Some(p), Some(qt)) => (p, qt),
            _ => return Err(Error::Numerical("SVD vectors missing".into())),
        };
        let mut order: Vec<usize> = (0..l).collect();
        order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
        let top = &order[..k];
        let sigma1 = svd.singular_values[order[0]];

        let converged = l == full
            || top.iter().all(|&c| (bd.residual * p[(l - 1, c)]).abs() <= RESIDUAL_TOL * sigma1);
        if !converged && steps < full {
            steps = full.min(steps * 2);
            continue;
        }
        if !converged {
            return Err(Error::Numerical("truncated SVD did not converge".into()));
        }

        let mut u = Array2::zeros((m, k));
        let mut v = Array2::zeros((n, k));
        let mut s = Vec::with_capacity(k);
        for (out, &c) in top.iter().enumerate() {
            let mut left = vec![0.0; m];
            for (r, basis) in bd.u.iter().enumerate() {
                axpy(&mut left, p[(r, c)], basis);
            }
            let mut right = vec![0.0; n];
            for (r, basis) in bd.v.iter().enumerate() {
                axpy(&mut right, qt[(c, r)], basis);
            }
            let mut peak = 0usize;
            for (i, x) in left.iter().enumerate() {
                if x.abs() > left[peak].abs() {
                    peak = i;
                }
            }
            let sign = if left[peak] < 0.0 { -1.0 } else { 1.0 };
            for i in 0..m {
                u[[i, out]] = sign * left[i];
            }
            for j in 0..n {
                v[[j, out]] = sign * right[j];
            }
            s.push(svd.singular_values[c]);
        }
        return Ok(TruncatedSvd { u, s, v });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Vocabulary, Weighting};
    use std::sync::Arc;

    pub(crate) fn dense(rows: &[&[f64]]) -> DocTermMatrix {
        let m = rows.len();
        let n = rows[0].len();
        let vocab = Arc::new(Vocabulary::new((0..m).map(|i| format!("t{i}")).collect()).unwrap());
        let cols = (0..n)
            .map(|j| (0..m).map(|i| (i, rows[i][j])).collect())
            .collect();
        DocTermMatrix::from_columns(vocab, (0..n).map(|j| format!("d{j}")).collect(), cols, Weighting::Weighted)
            .unwrap()
    }

    #[test]
    fn diagonal_matrix() {
        let a = dense(&[&[3.0, 0.0], &[0.0, 1.0]]);
        let svd = truncated_svd(&a, 2).unwrap();
        assert!((svd.s[0] - 3.0).abs() < 1e-12);
        assert!((svd.s[1] - 1.0).abs() < 1e-12);
        assert!((svd.u[[0, 0]] - 1.0).abs() < 1e-12);
        assert!((svd.v[[0, 0]] - 1.0).abs() < 1e-12);
        assert!(svd.u[[1, 0]].abs() < 1e-12);
    }

    #[test]
    fn reconstructs_a_rank_two_matrix() {
        let a = dense(&[
            &[1.0, 2.0, 0.0, 1.0],
            &[2.0, 4.0, 0.0, 2.0],
            &[0.0, 0.0, 3.0, 1.0],
            &[0.0, 0.0, 6.0, 2.0],
            &[1.0, 2.0, 3.0, 2.0],
        ]);
        let svd = truncated_svd(&a, 2).unwrap();
        let d = a.to_dense();
        for i in 0..5 {
            for j in 0..4 {
                let r: f64 = (0..2).map(|c| svd.u[[i, c]] * svd.s[c] * svd.v[[j, c]]).sum();
                assert!((r - d[[i, j]]).abs() < 1e-10, "({i},{j})");
            }
        }
    }

    #[test]
    fn sign_convention() {
        let a = dense(&[&[0.0, 1.0, 2.0], &[1.0, 0.0, 1.0], &[2.0, 1.0, 0.0]]);
        let svd = truncated_svd(&a, 3).unwrap();
        for c in 0..3 {
            let col = svd.u.column(c);
            let peak = col.iter().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { *x } else { acc });
            assert!(peak > 0.0);
        }
    }

    #[test]
    fn rank_out_of_range() {
        let a = dense(&[&[1.0, 0.0]]);
        assert!(truncated_svd(&a, 2).is_err());
        assert!(truncated_svd(&a, 0).is_err());
    }
}
