use crate::error::{check_dim, Error, Result};

use super::Matrix;

/// Whether off-diagonal covariances are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CovarianceMode {
    Full,
    Diagonal,
}

/// Sample mean and unbiased sample covariance of a set of vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceEstimate {
    pub mean: Vec<f64>,
    pub matrix: Matrix,
    pub mode: CovarianceMode,
    pub count: usize,
}

impl CovarianceEstimate {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// The matrix with the standard ridge `1e-8 * trace / d` added to its diagonal.
    pub fn regularized(&self) -> Matrix {
        let mut m = self.matrix.clone();
        m.add_to_diagonal(ridge_epsilon(&self.matrix));
        m
    }
}

/// Ridge added to covariance diagonals before factorisation.
pub fn ridge_epsilon(matrix: &Matrix) -> f64 {
    let d = matrix.rows().max(1) as f64;
    let eps = 1e-8 * matrix.trace() / d;
    if eps > 0.0 {
        eps
    } else {
        // all-constant features: any tiny positive ridge makes the matrix SPD
        1e-12
    }
}

pub fn sample_mean<'a, I>(vectors: I, dim: usize) -> Result<(Vec<f64>, usize)>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut mean = vec![0.0; dim];
    let mut n = 0usize;
    for v in vectors {
        check_dim(dim, v.len())?;
        for (m, x) in mean.iter_mut().zip(v) {
            *m += x;
        }
        n += 1;
    }
    if n > 0 {
        for m in &mut mean {
            *m /= n as f64;
        }
    }
    Ok((mean, n))
}

/// Two-pass mean / covariance with `n - 1` denominator.
pub fn sample_mean_covariance<V: AsRef<[f64]>>(
    vectors: &[V],
    mode: CovarianceMode,
) -> Result<CovarianceEstimate> {
    if vectors.len() < 2 {
        return Err(Error::FewerThanTwoSamples(vectors.len()));
    }
    let d = vectors[0].as_ref().len();
    if d == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            actual: 0,
        });
    }
    let (mean, n) = sample_mean(vectors.iter().map(AsRef::as_ref), d)?;
    let mut matrix = Matrix::zeros(d, d);
    let mut centered = vec![0.0; d];
    for v in vectors {
        for ((c, x), m) in centered.iter_mut().zip(v.as_ref()).zip(&mean) {
            *c = x - m;
        }
        for i in 0..d {
            let ci = centered[i];
            match mode {
                CovarianceMode::Full => {
                    for j in i..d {
                        matrix[(i, j)] += ci * centered[j];
                    }
                }
                CovarianceMode::Diagonal => matrix[(i, i)] += ci * ci,
            }
        }
    }
    let denom = (n - 1) as f64;
    for i in 0..d {
        for j in i..d {
            let v = matrix[(i, j)] / denom;
            matrix[(i, j)] = v;
            matrix[(j, i)] = v;
        }
    }
    Ok(CovarianceEstimate {
        mean,
        matrix,
        mode,
        count: n,
    })
}
