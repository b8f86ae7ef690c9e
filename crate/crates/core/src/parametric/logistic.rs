//! Ridge-penalized logistic regression, one-vs-rest for several classes.

use crate::domain::{Dataset, TrainedClassifier};
use crate::error::{check_dim, Error, Result};
use crate::numerics::{Cholesky, Matrix};

/// Default penalty on the slope coefficients.
pub const DEFAULT_PENALTY: f64 = 1e-4;
pub const MAX_NEWTON_ITERATIONS: usize = 100;
/// Newton stops once the gradient norm is below this, or once the predicted
/// ascent is at rounding level.
pub const DEFAULT_GRADIENT_TOLERANCE: f64 = 1e-8;

/// `1 / (1 + e^-z)`, evaluated without overflow.
pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    /// `lambda` in `loglik(beta) - lambda |beta_{1..d}|^2`.
    pub penalty: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self {
            penalty: DEFAULT_PENALTY,
            max_iterations: MAX_NEWTON_ITERATIONS,
            tolerance: DEFAULT_GRADIENT_TOLERANCE,
        }
    }
}

fn linear(beta: &[f64], x: &[f64]) -> f64 {
    beta[0] + beta[1..].iter().zip(x).map(|(b, v)| b * v).sum::<f64>()
}

/// Penalized log-likelihood of `beta` (intercept first) on labels in {0, 1}.
pub fn penalized_log_likelihood(points: &[Vec<f64>], labels: &[f64], beta: &[f64], penalty: f64) -> f64 {
    let ll: f64 = points
        .iter()
        .zip(labels)
        .map(|(x, &y)| {
            let z = linear(beta, x);
            // y log p + (1 - y) log(1 - p) = y z - log(1 + e^z)
            y * z - softplus(z)
        })
        .sum();
    ll - penalty * beta[1..].iter().map(|b| b * b).sum::<f64>()
}

/// Gradient of [`penalized_log_likelihood`].
pub fn penalized_gradient(points: &[Vec<f64>], labels: &[f64], beta: &[f64], penalty: f64) -> Vec<f64> {
    let mut g = vec![0.0; beta.len()];
    for (x, &y) in points.iter().zip(labels) {
        let r = y - sigmoid(linear(beta, x));
        g[0] += r;
        for (gj, xj) in g[1..].iter_mut().zip(x) {
            *gj += r * xj;
        }
    }
    for (gj, bj) in g[1..].iter_mut().zip(&beta[1..]) {
        *gj -= 2.0 * penalty * bj;
    }
    g
}

/// Maximizes the penalized log-likelihood by Newton's method with step halving.
/// Relative tolerance on the predicted Newton ascent.
const DECREMENT_TOLERANCE: f64 = 1e-12;

pub fn fit_logistic_binary(points: &[Vec<f64>], labels: &[f64], config: &LogisticConfig) -> Result<Vec<f64>> {
    check_dim(points.len(), labels.len())?;
    if points.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if !(labels.contains(&0.0) && labels.contains(&1.0)) {
        return Err(Error::SingleClassInput);
    }
    if let Some(bad) = labels.iter().find(|&&y| y != 0.0 && y != 1.0) {
        return Err(Error::InvalidArgument(format!("logistic labels must be 0 or 1, got {bad}")));
    }
    let d = points[0].len();
    let p = d + 1;
    let lambda = config.penalty;
    let mut beta = vec![0.0; p];
    let mut objective = penalized_log_likelihood(points, labels, &beta, lambda);
    for _ in 0..config.max_iterations {
        let g = penalized_gradient(points, labels, &beta, lambda);
        if g.iter().map(|v| v * v).sum::<f64>().sqrt() <= config.tolerance {
            return finish(points, labels, beta, lambda);
        }
        // negative Hessian: X^T W X + 2 lambda I (slopes only)
        let mut h = Matrix::zeros(p, p);
        for x in points {
            let prob = sigmoid(linear(&beta, x));
            let w = prob * (1.0 - prob);
            let xi = |k: usize| if k == 0 { 1.0 } else { x[k - 1] };
            for a in 0..p {
                let wa = w * xi(a);
                for b in a..p {
                    h[(a, b)] += wa * xi(b);
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                h[(a, b)] = h[(b, a)];
            }
        }
        for a in 1..p {
            h[(a, a)] += 2.0 * lambda;
        }
        let step = match Cholesky::factor(&h) {
            Ok(c) => c.solve(&g)?,
            Err(_) => return Err(Error::NoConvergence("logistic regression (singular Hessian)")),
        };
        // half the squared Newton decrement predicts the remaining ascent; once
        // it is at rounding level of the objective the gradient cannot shrink further
        let decrement = 0.5 * g.iter().zip(&step).map(|(a, b)| a * b).sum::<f64>();
        if decrement <= DECREMENT_TOLERANCE * (1.0 + objective.abs()) {
            return finish(points, labels, beta, lambda);
        }
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = beta.iter().zip(&step).map(|(b, s)| b + t * s).collect();
            let value = penalized_log_likelihood(points, labels, &trial, lambda);
            if value >= objective {
                beta = trial;
                objective = value;
                break;
            }
            t *= 0.5;
            if t < 1e-10 {
                // no ascent along the Newton direction: treat as stationary
                return finish(points, labels, beta, lambda);
            }
        }
        if beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::NoConvergence("logistic regression (diverging coefficients)"));
        }
    }
    let g = penalized_gradient(points, labels, &beta, lambda);
    if g.iter().map(|v| v * v).sum::<f64>().sqrt() <= config.tolerance {
        finish(points, labels, beta, lambda)
    } else {
        Err(Error::NoConvergence("logistic regression"))
    }
}

/// Without a penalty the likelihood has no maximizer when the classes are
/// strictly separated: scaling a separating `beta` up always helps. The
/// gradient still vanishes numerically, so separation is checked directly.
fn finish(points: &[Vec<f64>], labels: &[f64], beta: Vec<f64>, penalty: f64) -> Result<Vec<f64>> {
    if penalty == 0.0 {
        let separated = points.iter().zip(labels).all(|(x, &y)| {
            let z = linear(&beta, x);
            if y == 1.0 { z > 0.0 } else { z < 0.0 }
        });
        if separated {
            return Err(Error::NoConvergence("logistic regression (separable data)"));
        }
    }
    Ok(beta)
}

/// One binary logistic model per class (class vs. rest).
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    /// `betas[j]` has the intercept first.
    pub betas: Vec<Vec<f64>>,
}

pub fn fit_logistic_multiclass(train: &Dataset, config: &LogisticConfig) -> Result<LogisticModel> {
    let betas = (0..train.n_classes())
        .map(|j| {
            let y: Vec<f64> = train.labels().iter().map(|&l| if l == j { 1.0 } else { 0.0 }).collect();
            fit_logistic_binary(train.features(), &y, config)
        })
        .collect::<Result<_>>()?;
    Ok(LogisticModel { betas })
}

impl TrainedClassifier for LogisticModel {
    fn n_classes(&self) -> usize {
        self.betas.len()
    }

    fn dim(&self) -> usize {
        self.betas[0].len() - 1
    }

    /// `p(x, beta_j)` for each class.
    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok(self.betas.iter().map(|b| sigmoid(linear(b, x))).collect())
    }
}
