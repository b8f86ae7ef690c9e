//! Gaussian discriminant analysis.
//!
//! LDA shares one covariance matrix, estimated from all training vectors,
//! across classes and so has affine discriminants
//! `d_j(x) = x^T V^-1 mu_j - mu_j^T V^-1 mu_j / 2 + log pi_j`.
//! QDA estimates one covariance per class:
//! `d_j(x) = -log|V_j| / 2 - (x - mu_j)^T V_j^-1 (x - mu_j) / 2 + log pi_j`.

use crate::domain::{ClassPriors, Dataset, PriorMode, TrainedClassifier};
use crate::error::{check_dim, Error, Result};
use crate::numerics::{dot, sample_mean_covariance, Cholesky, CovarianceMode, Matrix};

fn class_vectors(train: &Dataset, min_count: usize) -> Result<Vec<Vec<&[f64]>>> {
    let mut by_class: Vec<Vec<&[f64]>> = vec![Vec::new(); train.n_classes()];
    for (x, &y) in train.features().iter().zip(train.labels()) {
        by_class[y].push(x);
    }
    for (class, v) in by_class.iter().enumerate() {
        if v.len() < min_count {
            return Err(Error::ClassTooSmall {
                class,
                count: v.len(),
                required: min_count,
            });
        }
    }
    Ok(by_class)
}

fn factor_regularized(matrix: &Matrix) -> Result<Cholesky> {
    let mut m = matrix.clone();
    m.add_to_diagonal(crate::numerics::ridge_epsilon(matrix));
    Cholesky::factor(&m).map_err(|_| Error::SingularCovariance)
}

/// Fitted linear discriminant.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    pub means: Vec<Vec<f64>>,
    pub mode: CovarianceMode,
    pub priors: ClassPriors,
    /// `V^-1 mu_j`.
    weights: Vec<Vec<f64>>,
    /// `-mu_j^T V^-1 mu_j / 2 + log pi_j`.
    offsets: Vec<f64>,
}

pub fn fit_lda(train: &Dataset, mode: CovarianceMode, prior_mode: PriorMode) -> Result<LdaModel> {
    let by_class = class_vectors(train, 2)?;
    let means: Vec<Vec<f64>> = by_class
        .iter()
        .map(|v| sample_mean_covariance(v, CovarianceMode::Diagonal).map(|c| c.mean))
        .collect::<Result<_>>()?;
    let pooled = sample_mean_covariance(train.features(), mode)?;
    let priors = prior_mode.priors(train)?;
    LdaModel::from_parts(means, &pooled.matrix, mode, priors)
}

impl LdaModel {
    /// Builds the model from class means and a shared covariance (ridge is applied here).
    pub fn from_parts(
        means: Vec<Vec<f64>>,
        covariance: &Matrix,
        mode: CovarianceMode,
        priors: ClassPriors,
    ) -> Result<Self> {
        let chol = factor_regularized(covariance)?;
        let mut weights = Vec::with_capacity(means.len());
        let mut offsets = Vec::with_capacity(means.len());
        for (j, mu) in means.iter().enumerate() {
            let w = chol.solve(mu)?;
            offsets.push(-0.5 * dot(mu, &w) + priors.log(j));
            weights.push(w);
        }
        Ok(Self {
            means,
            mode,
            priors,
            weights,
            offsets,
        })
    }
}

impl TrainedClassifier for LdaModel {
    fn n_classes(&self) -> usize {
        self.means.len()
    }

    fn dim(&self) -> usize {
        self.means[0].len()
    }

    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok(self
            .weights
            .iter()
            .zip(&self.offsets)
            .map(|(w, c)| dot(x, w) + c)
            .collect())
    }
}

/// Fitted quadratic discriminant.
#[derive(Debug, Clone, PartialEq)]
pub struct QdaModel {
    pub means: Vec<Vec<f64>>,
    pub mode: CovarianceMode,
    pub priors: ClassPriors,
    factors: Vec<Cholesky>,
    /// `-log|V_j| / 2 + log pi_j`.
    offsets: Vec<f64>,
}

pub fn fit_qda(train: &Dataset, mode: CovarianceMode, prior_mode: PriorMode) -> Result<QdaModel> {
    let by_class = class_vectors(train, 2)?;
    let mut means = Vec::with_capacity(by_class.len());
    let mut covs = Vec::with_capacity(by_class.len());
    for v in &by_class {
        let est = sample_mean_covariance(v, mode)?;
        means.push(est.mean);
        covs.push(est.matrix);
    }
    let priors = prior_mode.priors(train)?;
    QdaModel::from_parts(means, &covs, mode, priors)
}

impl QdaModel {
    /// Builds the model from class means and per-class covariances (ridge is applied here).
    pub fn from_parts(
        means: Vec<Vec<f64>>,
        covariances: &[Matrix],
        mode: CovarianceMode,
        priors: ClassPriors,
    ) -> Result<Self> {
        check_dim(means.len(), covariances.len())?;
        let mut factors = Vec::with_capacity(means.len());
        let mut offsets = Vec::with_capacity(means.len());
        for (j, cov) in covariances.iter().enumerate() {
            let chol = factor_regularized(cov)?;
            offsets.push(-0.5 * chol.log_determinant() + priors.log(j));
            factors.push(chol);
        }
        Ok(Self {
            means,
            mode,
            priors,
            factors,
            offsets,
        })
    }
}

impl TrainedClassifier for QdaModel {
    fn n_classes(&self) -> usize {
        self.means.len()
    }

    fn dim(&self) -> usize {
        self.means[0].len()
    }

    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let mut centered = vec![0.0; x.len()];
        self.means
            .iter()
            .zip(&self.factors)
            .zip(&self.offsets)
            .map(|((mu, chol), c)| {
                for ((t, a), m) in centered.iter_mut().zip(x).zip(mu) {
                    *t = a - m;
                }
                Ok(c - 0.5 * chol.quadratic_form(&centered)?)
            })
            .collect()
    }
}
