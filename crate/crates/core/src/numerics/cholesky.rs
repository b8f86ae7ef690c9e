use crate::error::{check_dim, Error, Result};

use super::Matrix;

/// Lower-triangular Cholesky factor `A = L L^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    lower: Matrix,
}

impl Cholesky {
    pub fn factor(matrix: &Matrix) -> Result<Self> {
        let n = matrix.require_square()?;
        let mut l = Matrix::zeros(n, n);
        for j in 0..n {
            let mut diag = matrix[(j, j)];
            for k in 0..j {
                diag -= l[(j, k)] * l[(j, k)];
            }
            if !(diag > 0.0) || !diag.is_finite() {
                return Err(Error::NotPositiveDefinite { row: j, pivot: diag });
            }
            let ljj = diag.sqrt();
            l[(j, j)] = ljj;
            for i in (j + 1)..n {
                let mut s = matrix[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / ljj;
            }
        }
        Ok(Self { lower: l })
    }

    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    pub fn lower(&self) -> &Matrix {
        &self.lower
    }

    /// Solves `L y = b`.
    pub fn forward(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        check_dim(n, b.len())?;
        let l = &self.lower;
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= l[(i, k)] * y[k];
            }
            y[i] = s / l[(i, i)];
        }
        Ok(y)
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        let l = &self.lower;
        let mut x = self.forward(b)?;
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= l[(k, i)] * x[k];
            }
            x[i] = s / l[(i, i)];
        }
        Ok(x)
    }

    /// `log |A|` from the factor diagonal.
    pub fn log_determinant(&self) -> f64 {
        (0..self.dim()).map(|i| 2.0 * self.lower[(i, i)].ln()).sum()
    }

    /// `b^T A^{-1} b`.
    pub fn quadratic_form(&self, b: &[f64]) -> Result<f64> {
        let y = self.forward(b)?;
        Ok(y.iter().map(|v| v * v).sum())
    }

    pub fn inverse(&self) -> Matrix {
        let n = self.dim();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e).expect("dimension checked");
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

/// Solves `A x = b` for symmetric positive definite `A` by Cholesky.
pub fn solve_spd(matrix: &Matrix, rhs: &[f64]) -> Result<Vec<f64>> {
    check_dim(matrix.rows(), rhs.len())?;
    Cholesky::factor(matrix)?.solve(rhs)
}
