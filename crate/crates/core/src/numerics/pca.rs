use crate::error::{check_dim, Error, Result};

use super::covariance::{sample_mean_covariance, CovarianceMode};
use super::eigen::eigen_symmetric;
use super::Matrix;

/// Orthonormal eigenbasis of a sample covariance, largest eigenvalue first.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalComponentBasis {
    pub center: Vec<f64>,
    /// Columns are the principal components.
    pub components: Matrix,
    pub eigenvalues: Vec<f64>,
    /// Cumulative fraction of total variance explained by the first `i + 1` components.
    pub variance_explained: Vec<f64>,
}

impl PrincipalComponentBasis {
    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn component(&self, i: usize) -> Vec<f64> {
        self.components.column(i)
    }

    /// Coordinates of `x - center` on the first `m` components.
    pub fn transform(&self, x: &[f64], m: usize) -> Result<Vec<f64>> {
        let d = self.dim();
        check_dim(d, x.len())?;
        if m < 1 || m > d {
            return Err(Error::BadComponentCount {
                requested: m,
                available: d,
            });
        }
        let centered: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        Ok((0..m)
            .map(|i| {
                (0..d).map(|r| self.components[(r, i)] * centered[r]).sum::<f64>()
            })
            .collect())
    }
}

pub fn pca_fit<V: AsRef<[f64]>>(vectors: &[V]) -> Result<PrincipalComponentBasis> {
    let cov = sample_mean_covariance(vectors, CovarianceMode::Full)?;
    let eig = eigen_symmetric(&cov.matrix)?;
    let eigenvalues: Vec<f64> = eig.eigenvalues.iter().map(|v| v.max(0.0)).collect();
    let total: f64 = eigenvalues.iter().sum();
    let mut cumulative = 0.0;
    let variance_explained = eigenvalues
        .iter()
        .map(|v| {
            cumulative += v;
            if total > 0.0 {
                (cumulative / total).min(1.0)
            } else {
                1.0
            }
        })
        .collect();
    Ok(PrincipalComponentBasis {
        center: cov.mean,
        components: eig.eigenvectors,
        eigenvalues,
        variance_explained,
    })
}

pub fn pca_transform(basis: &PrincipalComponentBasis, x: &[f64], m: usize) -> Result<Vec<f64>> {
    basis.transform(x, m)
}
