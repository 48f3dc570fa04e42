//! Projected-gradient solver for the non-negative least-squares half steps of
//! alternating NMF.
//!
//! Each half step minimizes `½‖A − X Bᵀ‖²` over `X ≥ 0` with `B` fixed. Only
//! `G = BᵀB` and `C = A B` are needed: the gradient is `X G − C`. Steps are
//! projected onto the non-negative orthant and accepted by the Armijo rule
//! `(1 − σ)⟨∇f, d⟩ + ½⟨d, d G⟩ < 0` with `σ = 0.01`, growing or shrinking the
//! step size by a factor of 10.

use ndarray::{Array2, Zip};

const SUFFICIENT_DECREASE: f64 = 0.01;
const STEP_FACTOR: f64 = 0.1;
const MAX_LINE_SEARCH: usize = 20;

/// Norm of the projected gradient: components that could still move.
fn projected_gradient_norm(x: &Array2<f64>, grad: &Array2<f64>) -> f64 {
    Zip::from(x)
        .and(grad)
        .fold(0.0, |acc, &xv, &g| if g < 0.0 || xv > 0.0 { acc + g * g } else { acc })
        .sqrt()
}

fn project(x: &Array2<f64>, grad: &Array2<f64>, step: f64) -> Array2<f64> {
    let mut out = x - &(grad * step);
    out.mapv_inplace(|v| v.max(0.0));
    out
}

fn sufficient_decrease(x: &Array2<f64>, xn: &Array2<f64>, grad: &Array2<f64>, gram: &Array2<f64>) -> bool {
    let d = xn - x;
    let gd = (grad * &d).sum();
    let dqd = (&d.dot(gram) * &d).sum();
    (1.0 - SUFFICIENT_DECREASE) * gd + 0.5 * dqd < 0.0
}

/// Run at most `max_iter` projected-gradient iterations on `x`, stopping early
/// once the projected gradient norm drops below `tol`. Returns the number of
/// iterations that changed `x` (0 if `x` was already optimal to `tol`).
pub(crate) fn solve_nnls(
    x: &mut Array2<f64>,
    gram: &Array2<f64>,
    cross: &Array2<f64>,
    tol: f64,
    max_iter: usize,
) -> usize {
    let mut step = 1.0;
    for iter in 0..max_iter {
        let grad = x.dot(gram) - cross;
        if projected_gradient_norm(x, &grad) < tol {
            return iter;
        }

        let mut candidate = project(x, &grad, step);
        let shrinking = !sufficient_decrease(x, &candidate, &grad, gram);
        if shrinking {
            let mut accepted = false;
            for _ in 1..MAX_LINE_SEARCH {
                step *= STEP_FACTOR;
                candidate = project(x, &grad, step);
                if sufficient_decrease(x, &candidate, &grad, gram) {
                    accepted = true;
                    break;
                }
            }
            if accepted {
                *x = candidate;
            }
        } else {
            // The first trial already decreases enough; try longer steps while they do.
            let mut best = candidate;
            for _ in 1..MAX_LINE_SEARCH {
                let next_step = step / STEP_FACTOR;
                let next = project(x, &grad, next_step);
                if next == best || !sufficient_decrease(x, &next, &grad, gram) {
                    break;
                }
                step = next_step;
                best = next;
            }
            *x = best;
        }
    }
    max_iter
}
