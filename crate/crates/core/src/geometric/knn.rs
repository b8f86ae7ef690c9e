//! k-nearest-neighbour classification by majority vote.

use std::fmt;
use std::str::FromStr;

use crate::domain::{Dataset, TrainedClassifier};
use crate::error::{check_dim, Error, Result};
use crate::numerics::{sample_mean_covariance, Cholesky, CovarianceMode};

/// Default neighbourhood size.
pub const DEFAULT_K: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Euclidean,
    CityBlock,
    Mahalanobis,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::Euclidean => "Euclidean",
            Metric::CityBlock => "CityBlock",
            Metric::Mahalanobis => "Mahalanobis",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(Metric::Euclidean),
            "cityblock" | "manhattan" => Ok(Metric::CityBlock),
            "mahalanobis" => Ok(Metric::Mahalanobis),
            _ => Err(Error::InvalidArgument(format!("unknown metric '{s}'"))),
        }
    }
}

/// Distance between `x` and `y`; `cov` is the factor of the (regularized)
/// covariance and is required for the Mahalanobis metric.
pub fn distance(metric: Metric, x: &[f64], y: &[f64], cov: Option<&Cholesky>) -> Result<f64> {
    check_dim(x.len(), y.len())?;
    Ok(match metric {
        Metric::Euclidean => x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt(),
        Metric::CityBlock => x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum(),
        Metric::Mahalanobis => {
            let chol = cov.ok_or(Error::SingularCovariance)?;
            let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            chol.quadratic_form(&diff)?.sqrt()
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    pub k: usize,
    pub metric: Metric,
    points: Vec<Vec<f64>>,
    labels: Vec<usize>,
    n_classes: usize,
    covariance: Option<Cholesky>,
}

/// Stores the training set. For the Mahalanobis metric the covariance of all
/// training vectors is estimated and regularized here.
pub fn fit_knn(train: &Dataset, k: usize, metric: Metric) -> Result<KnnModel> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if k == 0 || k > train.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} must lie in 1..={}",
            train.len()
        )));
    }
    let covariance = match metric {
        Metric::Mahalanobis => {
            let est = sample_mean_covariance(train.features(), CovarianceMode::Full)?;
            Some(Cholesky::factor(&est.regularized()).map_err(|_| Error::SingularCovariance)?)
        }
        _ => None,
    };
    Ok(KnnModel {
        k,
        metric,
        points: train.features().to_vec(),
        labels: train.labels().to_vec(),
        n_classes: train.n_classes(),
        covariance,
    })
}

impl KnnModel {
    /// Indices of the `k` nearest training points, nearest first; equal
    /// distances keep training order.
    pub fn neighbours(&self, x: &[f64]) -> Result<Vec<usize>> {
        check_dim(self.dim(), x.len())?;
        let mut d: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| Ok((distance(self.metric, x, p, self.covariance.as_ref())?, i)))
            .collect::<Result<_>>()?;
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        Ok(d.into_iter().take(self.k).map(|(_, i)| i).collect())
    }
}

impl TrainedClassifier for KnnModel {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn dim(&self) -> usize {
        self.points[0].len()
    }

    /// Vote counts among the `k` nearest neighbours.
    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut votes = vec![0.0; self.n_classes];
        for i in self.neighbours(x)? {
            votes[self.labels[i]] += 1.0;
        }
        Ok(votes)
    }
}
