use crate::error::{check_dim, Error, Result};

use super::cholesky::Cholesky;
use super::Matrix;

/// Refinement passes applied after the ridged solve.
const REFINEMENT_STEPS: usize = 3;

/// Least squares through the normal equations `X^T X b = X^T y`.
///
/// The system is factored with a ridge `eps = ridge * trace(X^T X) / p` on
/// the diagonal, then the solution is corrected by a few rounds of iterative
/// refinement against the unridged system (iterated Tikhonov). On a
/// well-conditioned design this converges to the ordinary least squares
/// solution; on a singular one it stays bounded. Rows of `design` are
/// observations and must already contain an intercept column if one is wanted.
pub fn ridge_least_squares<V: AsRef<[f64]>>(design: &[V], y: &[f64], ridge: f64) -> Result<Vec<f64>> {
    check_dim(design.len(), y.len())?;
    let p = design.first().map_or(0, |r| r.as_ref().len());
    if p == 0 {
        return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
    }
    let mut xtx = Matrix::zeros(p, p);
    let mut xty = vec![0.0; p];
    for (row, &target) in design.iter().zip(y) {
        let row = row.as_ref();
        check_dim(p, row.len())?;
        for i in 0..p {
            xty[i] += row[i] * target;
            for j in i..p {
                xtx[(i, j)] += row[i] * row[j];
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            xtx[(i, j)] = xtx[(j, i)];
        }
    }
    if ridge <= 0.0 {
        return Cholesky::factor(&xtx)?.solve(&xty);
    }
    let mut ridged = xtx.clone();
    ridged.add_to_diagonal(ridge * xtx.trace() / p as f64);
    let chol = Cholesky::factor(&ridged)?;
    let mut b = chol.solve(&xty)?;
    for _ in 0..REFINEMENT_STEPS {
        let ab = xtx.mul_vec(&b)?;
        let resid: Vec<f64> = xty.iter().zip(&ab).map(|(y, a)| y - a).collect();
        let delta = chol.solve(&resid)?;
        for (bi, di) in b.iter_mut().zip(&delta) {
            *bi += di;
        }
    }
    Ok(b)
}
