//! Dense linear algebra for the strictly positive constructor: least squares
//! via the normal equations and a small Phase-I simplex for box-constrained feasibility.

use nalgebra::{DMatrix, DVector};

/// Least-squares solution of `a x = b` (minimum norm) and its residual.
///
/// Pseudo-inverse through the symmetric eigendecomposition of `aᵀa`, plus
/// one refinement step. The factor systems are 0/1 incidence matrices with a
/// gauge null space, so the squared condition number stays small; nalgebra's
/// SVD was observed to return a wrong decomposition on exactly these.
pub(crate) fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    let eig = (a.transpose() * a).symmetric_eigen();
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let cutoff = top * 1e-10;
    let inv = eig.eigenvalues.map(|l| if l > cutoff { 1.0 / l } else { 0.0 });
    let solve = |rhs: &DVector<f64>| {
        let q = &eig.eigenvectors;
        q * (q.transpose() * (a.transpose() * rhs)).component_mul(&inv)
    };
    let mut x = solve(b);
    let r = b - a * &x;
    x += solve(&r);
    let r = a * &x - b;
    (x, r)
}

/// Finds `y` with `a y = c` and `0 ≤ y ≤ upper`, or `None` if the system is
/// infeasible (within `tol` on the summed equality violation).
///
/// Phase-I simplex on a dense tableau with Bland's rule. Each bound becomes a
/// row `y_j + s_j = u_j`; each equality row gets an artificial variable.
pub(crate) fn box_feasible(a: &DMatrix<f64>, c: &[f64], upper: &[f64], tol: f64) -> Option<Vec<f64>> {
    const PIVOT_EPS: f64 = 1e-11;
    const MAX_ITERS: usize = 200_000;

    let (m, n) = a.shape();
    let rows = m + n;
    let cols = 2 * n + m; // y, s, artificials
    let width = cols + 1; // + rhs
    let mut t = vec![0.0; (rows + 1) * width];
    let at = |r: usize, c: usize| r * width + c;

    for i in 0..m {
        let sign = if c[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[at(i, j)] = sign * a[(i, j)];
        }
        t[at(i, 2 * n + i)] = 1.0;
        t[at(i, cols)] = sign * c[i];
    }
    for j in 0..n {
        let r = m + j;
        t[at(r, j)] = 1.0;
        t[at(r, n + j)] = 1.0;
        t[at(r, cols)] = upper[j];
    }
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + i).chain((0..n).map(|j| n + j)).collect();

    // objective row: minimize the sum of artificials, expressed in nonbasics
    let obj = rows;
    for i in 0..m {
        for k in 0..width {
            if k < 2 * n || k == cols {
                t[at(obj, k)] -= t[at(i, k)];
            }
        }
    }

    for _ in 0..MAX_ITERS {
        let Some(enter) = (0..cols).find(|&k| t[at(obj, k)] < -PIVOT_EPS) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..rows {
            let coef = t[at(r, enter)];
            if coef > PIVOT_EPS {
                let ratio = t[at(r, cols)] / coef;
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((best, br)) => {
                        if ratio < br - PIVOT_EPS || (ratio <= br + PIVOT_EPS && basis[r] < basis[best]) {
                            Some((r, ratio))
                        } else {
                            Some((best, br))
                        }
                    }
                };
            }
        }
        // Phase I is bounded below by zero, so an entering column always has
        // a blocking row.
        let (pr, _) = leave?;
        let pivot = t[at(pr, enter)];
        for k in 0..width {
            t[at(pr, k)] /= pivot;
        }
        for r in 0..=rows {
            if r == pr {
                continue;
            }
            let f = t[at(r, enter)];
            if f != 0.0 {
                for k in 0..width {
                    t[at(r, k)] -= f * t[at(pr, k)];
                }
            }
        }
        basis[pr] = enter;
    }

    let infeasibility = -t[at(obj, cols)];
    if infeasibility > tol {
        return None;
    }
    let mut y = vec![0.0; n];
    for (r, &b) in basis.iter().enumerate() {
        if b < n {
            y[b] = t[at(r, cols)].clamp(0.0, upper[b]);
        }
    }
    Some(y)
}
