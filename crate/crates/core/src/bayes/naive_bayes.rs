//! Naive Bayes with per-feature kernel density estimates.
//!
//! Features are treated as independent within each class, so the class score
//! is `log pi_j + sum_v log f_{j,v}(x_v)`. Every `f_{j,v}` uses the same
//! kernel and bandwidth.

use super::kde::{log_density_unchecked, Kernel};
use crate::domain::{ClassPriors, Dataset, PriorMode, TrainedClassifier};
use crate::error::{check_dim, Error, Result};
use crate::numerics::{ridge_epsilon, sample_mean_covariance, CovarianceMode};

/// Default bandwidth.
pub const DEFAULT_BANDWIDTH: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    pub kernel: Kernel,
    pub bandwidth: f64,
    pub priors: ClassPriors,
    /// `samples[j][v]` are the training values of feature `v` in class `j`.
    samples: Vec<Vec<Vec<f64>>>,
}

pub fn fit_nb(train: &Dataset, kernel: Kernel, bandwidth: f64, prior_mode: PriorMode) -> Result<NbModel> {
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::NonpositiveBandwidth(bandwidth));
    }
    let d = train.dim();
    let mut samples = vec![vec![Vec::new(); d]; train.n_classes()];
    for (x, &y) in train.features().iter().zip(train.labels()) {
        for (v, &value) in x.iter().enumerate() {
            samples[y][v].push(value);
        }
    }
    if let Some(class) = samples.iter().position(|s| s.first().is_none_or(Vec::is_empty)) {
        return Err(Error::ClassTooSmall {
            class,
            count: 0,
            required: 1,
        });
    }
    let priors = prior_mode.priors(train)?;
    Ok(NbModel {
        kernel,
        bandwidth,
        priors,
        samples,
    })
}

impl TrainedClassifier for NbModel {
    fn n_classes(&self) -> usize {
        self.samples.len()
    }

    fn dim(&self) -> usize {
        self.samples[0].len()
    }

    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok(self
            .samples
            .iter()
            .enumerate()
            .map(|(j, per_feature)| {
                self.priors.log(j)
                    + per_feature
                        .iter()
                        .zip(x)
                        .map(|(s, &xv)| log_density_unchecked(s, self.kernel, self.bandwidth, xv))
                        .sum::<f64>()
            })
            .collect())
    }
}

/// Naive Bayes with a fitted normal density per class and feature.
///
/// Variances use the same estimator and ridge as diagonal QDA, which this
/// model reproduces.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNbModel {
    pub priors: ClassPriors,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
}

pub fn fit_gaussian_nb(train: &Dataset, prior_mode: PriorMode) -> Result<GaussianNbModel> {
    let mut by_class: Vec<Vec<&[f64]>> = vec![Vec::new(); train.n_classes()];
    for (x, &y) in train.features().iter().zip(train.labels()) {
        by_class[y].push(x);
    }
    let mut means = Vec::new();
    let mut variances = Vec::new();
    for (class, v) in by_class.iter().enumerate() {
        if v.len() < 2 {
            return Err(Error::ClassTooSmall {
                class,
                count: v.len(),
                required: 2,
            });
        }
        let est = sample_mean_covariance(v, CovarianceMode::Diagonal)?;
        let eps = ridge_epsilon(&est.matrix);
        variances.push((0..est.dim()).map(|i| est.matrix[(i, i)] + eps).collect());
        means.push(est.mean);
    }
    Ok(GaussianNbModel {
        priors: prior_mode.priors(train)?,
        means,
        variances,
    })
}

impl TrainedClassifier for GaussianNbModel {
    fn n_classes(&self) -> usize {
        self.means.len()
    }

    fn dim(&self) -> usize {
        self.means[0].len()
    }

    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
        Ok(self
            .means
            .iter()
            .zip(&self.variances)
            .enumerate()
            .map(|(j, (mu, var))| {
                self.priors.log(j)
                    + x.iter()
                        .zip(mu)
                        .zip(var)
                        .map(|((xv, m), s2)| -0.5 * (xv - m) * (xv - m) / s2 - 0.5 * s2.ln() - half_ln_2pi)
                        .sum::<f64>()
            })
            .collect())
    }
}
