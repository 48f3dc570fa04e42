//! Rank-k NMF `A ≈ W H` by alternating non-negative least squares, each half
//! step solved with a few projected-gradient iterations. Initialization is
//! either seeded uniform random (sample runs) or NNDSVD (deterministic
//! reference runs).

mod io;
mod nndsvd;
mod solver;
mod svd;

use ndarray::Array2;
use rand::distributions::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

pub use self::io::{read_factorization, write_factorization, FactorizationMeta};
pub use self::nndsvd::nndsvd_init;
pub use self::svd::{truncated_svd, TruncatedSvd};
use crate::corpus::{DocTermMatrix, Vocabulary};
use crate::error::{Error, Result};
use crate::ranking::RankedList;
use crate::seed;

/// Iteration cap used when none is given.
pub const DEFAULT_MAX_ITER: usize = 50;
/// Relative improvement of `‖A − WH‖_F` below which iteration stops.
pub const DEFAULT_TOL: f64 = 1e-5;
/// Projected-gradient iterations allowed per half step.
pub const DEFAULT_INNER_ITER: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InitStrategy {
    Nndsvd,
    Random { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NmfOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub inner_iter: usize,
}

impl Default for NmfOptions {
    fn default() -> Self {
        NmfOptions {
            max_iter: DEFAULT_MAX_ITER,
            tol: DEFAULT_TOL,
            inner_iter: DEFAULT_INNER_ITER,
        }
    }
}

impl NmfOptions {
    pub fn with_max_iter(max_iter: usize) -> Self {
        NmfOptions {
            max_iter,
            ..Default::default()
        }
    }
}

/// Non-negative factors of a document-term matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// Topics as columns, `m × k`.
    pub w: Array2<f64>,
    /// Document memberships, `k × n`.
    pub h: Array2<f64>,
    /// `‖A − WH‖_F` at the starting point and after every iteration.
    pub error_trace: Vec<f64>,
    pub init: InitStrategy,
}

impl Factorization {
    pub fn k(&self) -> usize {
        self.w.ncols()
    }

    pub fn iterations(&self) -> usize {
        self.error_trace.len() - 1
    }

    pub fn final_error(&self) -> f64 {
        *self.error_trace.last().expect("trace holds the initial error")
    }
}

/// Seeded factors with entries drawn uniformly from the open interval (0, 1).
pub fn random_init(m: usize, n: usize, k: usize, seed: u64) -> (Array2<f64>, Array2<f64>) {
    let mut rng = seed::rng(seed);
    let w = Array2::from_shape_simple_fn((m, k), || rng.sample(Open01));
    let h = Array2::from_shape_simple_fn((k, n), || rng.sample(Open01));
    (w, h)
}

/// `A · Hᵀ` given `Hᵀ` (`n × k`), returned as `m × k`.
fn a_times(a: &DocTermMatrix, ht: &Array2<f64>) -> Array2<f64> {
    let k = ht.ncols();
    let mut out = Array2::<f64>::zeros((a.n_terms(), k));
    let buf = out.as_slice_mut().expect("standard layout");
    for j in 0..a.n_docs() {
        let hrow = ht.row(j);
        let hrow = hrow.as_slice().expect("standard layout");
        let (rows, vals) = a.column(j);
        for (&i, &v) in rows.iter().zip(vals) {
            let dst = &mut buf[i * k..(i + 1) * k];
            for (d, h) in dst.iter_mut().zip(hrow) {
                *d += v * h;
            }
        }
    }
    out
}

/// `Aᵀ · W` returned as `n × k`.
fn at_times(a: &DocTermMatrix, w: &Array2<f64>) -> Array2<f64> {
    let k = w.ncols();
    let wbuf = w.as_slice().expect("standard layout");
    let mut out = Array2::<f64>::zeros((a.n_docs(), k));
    for (j, mut row) in out.rows_mut().into_iter().enumerate() {
        let dst = row.as_slice_mut().expect("standard layout");
        let (rows, vals) = a.column(j);
        for (&i, &v) in rows.iter().zip(vals) {
            for (d, x) in dst.iter_mut().zip(&wbuf[i * k..(i + 1) * k]) {
                *d += v * x;
            }
        }
    }
    out
}

/// `‖A − W Htᵀ‖_F` from `‖A‖²`, the cross term `⟨Ht, AᵀW⟩` and the Gram matrices.
///
/// Near an exact fit the three terms cancel down to rounding noise (about
/// `√ε ‖A‖`), so small residuals are recomputed entry by entry.
fn residual(a: &DocTermMatrix, a_sq: f64, w: &Array2<f64>, ht: &Array2<f64>, atw: &Array2<f64>, wtw: &Array2<f64>) -> f64 {
    let hth = ht.t().dot(ht);
    let cross = (ht * atw).sum();
    let quad = (wtw * &hth).sum();
    let sq = a_sq - 2.0 * cross + quad;
    if sq > 1e-6 * a_sq {
        return sq.sqrt();
    }
    direct_residual(a, w, ht)
}

fn direct_residual(a: &DocTermMatrix, w: &Array2<f64>, ht: &Array2<f64>) -> f64 {
    let mut sq = 0.0;
    for j in 0..a.n_docs() {
        let mut col = w.dot(&ht.row(j));
        let (rows, vals) = a.column(j);
        for (&i, &v) in rows.iter().zip(vals) {
            col[i] -= v;
        }
        sq += col.iter().map(|x| x * x).sum::<f64>();
    }
    sq.sqrt()
}

fn check_factor(x: &Array2<f64>, what: &str) -> Result<()> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("non-finite entry in {what}")));
    }
    assert!(x.iter().all(|&v| v >= 0.0), "{what} has a negative entry");
    Ok(())
}

fn check_rank(matrix: &DocTermMatrix, k: usize) -> Result<()> {
    let (m, n) = (matrix.n_terms(), matrix.n_docs());
    if k == 0 || k > m.min(n) {
        return Err(Error::RankOutOfRange { k, rows: m, cols: n });
    }
    Ok(())
}

/// Factorize `matrix` with `k` topics.
///
/// Iterates until `max_iter` outer iterations or until the relative decrease of
/// the reconstruction error falls below `tol`. The result depends only on the
/// inputs: the same matrix, rank, initialization and options always produce
/// bitwise-identical factors.
pub fn nmf(
    matrix: &DocTermMatrix,
    k: usize,
    init: InitStrategy,
    options: &NmfOptions,
) -> Result<Factorization> {
    check_rank(matrix, k)?;
    if options.max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    let (w0, h0) = match init {
        InitStrategy::Nndsvd => {
            if let Some(row) = matrix.document_frequencies().iter().position(|&d| d == 0) {
                return Err(Error::ZeroRow { row });
            }
            nndsvd_init(matrix, k)?
        }
        InitStrategy::Random { seed } => random_init(matrix.n_terms(), matrix.n_docs(), k, seed),
    };
    factorize_from(matrix, w0, h0, init, options)
}

/// Alternating projected-gradient NMF from an explicit starting point.
pub fn factorize_from(
    matrix: &DocTermMatrix,
    w0: Array2<f64>,
    h0: Array2<f64>,
    init: InitStrategy,
    options: &NmfOptions,
) -> Result<Factorization> {
    let k = w0.ncols();
    check_rank(matrix, k)?;
    if w0.dim() != (matrix.n_terms(), k) || h0.dim() != (k, matrix.n_docs()) {
        return Err(Error::InvalidArgument("initial factor shapes do not match".into()));
    }
    let a_sq = matrix.frobenius_sq();
    let mut w = w0.as_standard_layout().into_owned();
    let mut ht = h0.t().as_standard_layout().into_owned();

    let mut wtw = w.t().dot(&w);
    let mut atw = at_times(matrix, &w);
    let hth = ht.t().dot(&ht);
    let aht = a_times(matrix, &ht);
    let grad_w = w.dot(&hth) - &aht;
    let grad_h = ht.dot(&wtw) - &atw;
    let init_grad = (grad_w.mapv(|g| g * g).sum() + grad_h.mapv(|g| g * g).sum()).sqrt();
    let mut tol_w = options.tol.max(1e-3) * init_grad;
    let mut tol_h = tol_w;

    let mut trace = vec![residual(matrix, a_sq, &w, &ht, &atw, &wtw)];
    for _ in 0..options.max_iter {
        let hth = ht.t().dot(&ht);
        let aht = a_times(matrix, &ht);
        let moved_w = solver::solve_nnls(&mut w, &hth, &aht, tol_w, options.inner_iter);
        if moved_w == 0 {
            tol_w *= 0.1;
        }
        check_factor(&w, "W")?;

        wtw = w.t().dot(&w);
        atw = at_times(matrix, &w);
        let moved_h = solver::solve_nnls(&mut ht, &wtw, &atw, tol_h, options.inner_iter);
        if moved_h == 0 {
            tol_h *= 0.1;
        }
        check_factor(&ht, "H")?;

        let prev = *trace.last().expect("non-empty");
        let err = residual(matrix, a_sq, &w, &ht, &atw, &wtw);
        trace.push(err);
        if err == 0.0 {
            break;
        }
        // A half step that did nothing only tightened its tolerance; give it another round.
        if moved_w > 0 && moved_h > 0 && (prev - err) / prev < options.tol {
            break;
        }
    }

    Ok(Factorization {
        w,
        h: ht.t().as_standard_layout().into_owned(),
        error_trace: trace,
        init,
    })
}

/// `k` ranked term lists of depth at most `t`, one per topic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingSet {
    topics: Vec<RankedList>,
    depth: usize,
}

impl RankingSet {
    pub fn new(topics: Vec<RankedList>, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidArgument("ranking depth must be at least 1".into()));
        }
        if topics.iter().any(|r| r.len() > depth) {
            return Err(Error::InvalidArgument(format!(
                "a ranked list is longer than the depth {depth}"
            )));
        }
        Ok(RankingSet { topics, depth })
    }

    pub fn topics(&self) -> &[RankedList] {
        &self.topics
    }

    pub fn k(&self) -> usize {
        self.topics.len()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Topics as term strings.
    pub fn terms(&self, vocabulary: &Vocabulary) -> Vec<Vec<String>> {
        self.topics
            .iter()
            .map(|r| r.items().iter().map(|&i| vocabulary.term(i).to_owned()).collect())
            .collect()
    }
}

/// Ranked term indices of one topic column: weight descending, ties by ascending
/// term index, non-positive weights excluded, at most `t` terms.
pub fn rank_column(w: &Array2<f64>, column: usize, t: usize) -> Vec<(usize, f64)> {
    let mut scored: Vec<(usize, f64)> = w
        .column(column)
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, x)| x > 0.0)
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(t);
    scored
}

/// Ranking set from a topic matrix `W` (`m × k`).
pub fn ranking_set_from_topics(w: &Array2<f64>, t: usize) -> Result<RankingSet> {
    let topics = (0..w.ncols())
        .map(|c| RankedList::new(rank_column(w, c, t).into_iter().map(|(i, _)| i).collect()))
        .collect::<Result<Vec<_>>>()?;
    RankingSet::new(topics, t)
}

/// The top-`t` terms of every basis vector of `f`.
pub fn extract_ranking_set(f: &Factorization, t: usize) -> Result<RankingSet> {
    ranking_set_from_topics(&f.w, t)
}
