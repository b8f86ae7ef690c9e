//! Soft-margin kernel support vector machines.
//!
//! The dual
//!
//! ```text
//! min_a  a^T Q a / 2 - e^T a    s.t.  0 <= a_i <= C,  y^T a = 0,   Q_ij = y_i y_j k(x_i, x_j)
//! ```
//!
//! is solved by sequential minimal optimization: each step updates one pair
//! of coordinates chosen with second-order working-set selection, keeping the
//! equality constraint satisfied exactly. Iteration stops once the maximal
//! KKT violation `m(a) - M(a)` drops below the tolerance.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::kernel::KernelSpec;
use crate::domain::{Dataset, TrainedClassifier};
use crate::error::{check_dim, Error, Result};
use crate::numerics::{Cholesky, Matrix};

pub const DEFAULT_COST: f64 = 1.0;
pub const DEFAULT_POLY_DEGREE: u32 = 3;
/// Stopping threshold on the maximal KKT violation.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
/// Cap on pair updates. Heavy-tailed inputs under the cubic kernel can need
/// several hundred thousand updates at the default tolerance.
pub const MAX_PAIR_UPDATES: usize = 5_000_000;
const TAU: f64 = 1e-12;
/// Pair updates between two attempts to solve the free-set subproblem
/// directly, and the largest free set for which that is attempted.
const POLISH_INTERVAL: usize = 2_000;
const POLISH_MAX_FREE: usize = 400;

/// Gaussian width used when none is given: `1 / (2 d)`.
pub fn default_gaussian_c(dim: usize) -> f64 {
    1.0 / (2.0 * dim.max(1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Strategy {
    #[default]
    OneVsRest,
    OneVsOne,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::OneVsRest => "ovr",
            Strategy::OneVsOne => "ovo",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ovr" | "one-vs-rest" => Ok(Strategy::OneVsRest),
            "ovo" | "one-vs-one" => Ok(Strategy::OneVsOne),
            _ => Err(Error::InvalidArgument(format!("unknown SVM strategy '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmConfig {
    pub kernel: KernelSpec,
    pub cost: f64,
    pub strategy: Strategy,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl SvmConfig {
    pub fn new(kernel: KernelSpec) -> Self {
        Self {
            kernel,
            cost: DEFAULT_COST,
            strategy: Strategy::OneVsRest,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: MAX_PAIR_UPDATES,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.cost > 0.0) || !self.cost.is_finite() {
            return Err(Error::InvalidArgument(format!("SVM cost must be positive, got {}", self.cost)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("SVM tolerance must be positive".into()));
        }
        match self.kernel {
            KernelSpec::Gaussian { c } if !(c > 0.0) => {
                Err(Error::InvalidArgument(format!("Gaussian kernel width must be positive, got {c}")))
            }
            KernelSpec::Polynomial { degree: 0 } => {
                Err(Error::InvalidArgument("polynomial degree must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Moves the free coordinates towards the minimizer of the dual restricted to
/// them, with the bounded ones held fixed.
///
/// SMO alone can crawl for millions of pair updates when the Gram matrix is
/// badly scaled (cubic kernel on heavy-tailed inputs) even though only a
/// handful of coordinates are free. The restricted problem is an
/// equality-constrained quadratic, solved here in closed form; the step is
/// then cut at the box and at the exact line minimum, so the objective never
/// increases. Returns whether a step was taken.
fn polish_free_set(gram: &Matrix, y: &[f64], cost: f64, alpha: &mut [f64], grad: &mut [f64]) -> bool {
    let free: Vec<usize> = (0..y.len()).filter(|&t| alpha[t] > 0.0 && alpha[t] < cost).collect();
    let m = free.len();
    if m < 2 || m > POLISH_MAX_FREE {
        return false;
    }
    let mut h = Matrix::zeros(m, m);
    for (a, &s) in free.iter().enumerate() {
        for (b, &t) in free.iter().enumerate() {
            h[(a, b)] = y[s] * y[t] * gram[(s, t)];
        }
    }
    let curvature_of = |d: &[f64]| -> f64 {
        (0..m).map(|a| d[a] * (0..m).map(|b| h[(a, b)] * d[b]).sum::<f64>()).sum()
    };
    let mut ridged = h.clone();
    let ridge = 1e-10 * (0..m).map(|a| h[(a, a)]).sum::<f64>() / m as f64;
    for a in 0..m {
        ridged[(a, a)] += ridge;
    }
    let Ok(factor) = Cholesky::factor(&ridged) else {
        return false;
    };
    let g: Vec<f64> = free.iter().map(|&s| grad[s]).collect();
    let yf: Vec<f64> = free.iter().map(|&s| y[s]).collect();
    let (Ok(hg), Ok(hy)) = (factor.solve(&g), factor.solve(&yf)) else {
        return false;
    };
    let yhy: f64 = yf.iter().zip(&hy).map(|(a, b)| a * b).sum();
    if !(yhy > 0.0) {
        return false;
    }
    let b = yf.iter().zip(&hg).map(|(a, c)| a * c).sum::<f64>() / yhy;
    let d: Vec<f64> = (0..m).map(|a| b * hy[a] - hg[a]).collect();
    let slope: f64 = g.iter().zip(&d).map(|(a, c)| a * c).sum();
    let curvature = curvature_of(&d);
    if !(slope < 0.0) || !(curvature > 0.0) {
        return false;
    }
    let mut step = -slope / curvature;
    let mut blocking = None;
    for (a, &s) in free.iter().enumerate() {
        let limit = if d[a] > 0.0 {
            (cost - alpha[s]) / d[a]
        } else if d[a] < 0.0 {
            -alpha[s] / d[a]
        } else {
            continue;
        };
        if limit < step {
            step = limit;
            blocking = Some(a);
        }
    }
    if !(step > 0.0) || !step.is_finite() {
        return false;
    }
    let mut delta = vec![0.0; m];
    for (a, &s) in free.iter().enumerate() {
        let next = if blocking == Some(a) {
            if d[a] > 0.0 { cost } else { 0.0 }
        } else {
            (alpha[s] + step * d[a]).clamp(0.0, cost)
        };
        delta[a] = next - alpha[s];
        alpha[s] = next;
    }
    for (k, gk) in grad.iter_mut().enumerate() {
        let change: f64 = free.iter().zip(&delta).map(|(&s, &ds)| y[s] * gram[(s, k)] * ds).sum();
        *gk += y[k] * change;
    }
    true
}

/// Result of the dual solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    /// Decision values are `sum_i a_i y_i k(x_i, x) - rho`.
    pub rho: f64,
    pub iterations: usize,
    /// Final `m(a) - M(a)`.
    pub violation: f64,
}

/// Solves the dual for a precomputed Gram matrix and labels in {-1, +1}.
pub fn solve_dual(gram: &Matrix, y: &[f64], cost: f64, tolerance: f64, max_iterations: usize) -> Result<SmoSolution> {
    let n = y.len();
    check_dim(gram.rows(), n)?;
    let upper = |a: f64| a >= cost;
    let lower = |a: f64| a <= 0.0;
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let mut iterations = 0;
    let mut violation;
    loop {
        // i: maximal -y_t G_t over I_up
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = usize::MAX;
        for t in 0..n {
            let in_up = if y[t] > 0.0 { !upper(alpha[t]) } else { !lower(alpha[t]) };
            if in_up {
                let v = -y[t] * grad[t];
                if v > gmax {
                    gmax = v;
                    i_sel = t;
                }
            }
        }
        // j: second-order selection over I_low
        let mut gmin = f64::INFINITY;
        let mut j_sel = usize::MAX;
        let mut best = f64::INFINITY;
        if i_sel != usize::MAX {
            let i = i_sel;
            let kii = gram[(i, i)];
            for t in 0..n {
                let in_low = if y[t] > 0.0 { !lower(alpha[t]) } else { !upper(alpha[t]) };
                if !in_low {
                    continue;
                }
                let v = -y[t] * grad[t];
                if v < gmin {
                    gmin = v;
                }
                let b = gmax - v;
                if b > 0.0 {
                    let mut a = kii + gram[(t, t)] - 2.0 * gram[(i, t)];
                    if a <= 0.0 {
                        a = TAU;
                    }
                    let obj = -b * b / a;
                    if obj < best {
                        best = obj;
                        j_sel = t;
                    }
                }
            }
        }
        violation = if i_sel == usize::MAX || gmin == f64::INFINITY { 0.0 } else { gmax - gmin };
        if violation < tolerance || j_sel == usize::MAX {
            break;
        }
        if iterations >= max_iterations {
            return Err(Error::NoConvergence("SMO dual solver"));
        }
        iterations += 1;
        if iterations % POLISH_INTERVAL == 0 && polish_free_set(gram, y, cost, &mut alpha, &mut grad) {
            continue;
        }

        let (i, j) = (i_sel, j_sel);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let kij = gram[(i, j)];
        if y[i] != y[j] {
            let mut quad = gram[(i, i)] + gram[(j, j)] + 2.0 * kij * y[i] * y[j];
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > cost {
                    alpha[i] = cost;
                    alpha[j] = cost - diff;
                }
            } else if alpha[j] > cost {
                alpha[j] = cost;
                alpha[i] = cost + diff;
            }
        } else {
            let mut quad = gram[(i, i)] + gram[(j, j)] - 2.0 * kij;
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > cost {
                if alpha[i] > cost {
                    alpha[i] = cost;
                    alpha[j] = sum - cost;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > cost {
                if alpha[j] > cost {
                    alpha[j] = cost;
                    alpha[i] = sum - cost;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let di = alpha[i] - old_i;
        let dj = alpha[j] - old_j;
        for (k, g) in grad.iter_mut().enumerate() {
            *g += y[k] * (y[i] * gram[(i, k)] * di + y[j] * gram[(j, k)] * dj);
        }
    }

    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut free = 0usize;
    let mut free_sum = 0.0;
    for t in 0..n {
        let yg = y[t] * grad[t];
        if upper(alpha[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if lower(alpha[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            free_sum += yg;
        }
    }
    let rho = if free > 0 { free_sum / free as f64 } else { 0.5 * (ub + lb) };
    Ok(SmoSolution {
        alpha,
        rho,
        iterations,
        violation,
    })
}

/// Dual objective `a^T Q a / 2 - e^T a` (minimization form).
pub fn dual_objective(gram: &Matrix, y: &[f64], alpha: &[f64]) -> f64 {
    let n = y.len();
    let mut quad = 0.0;
    for i in 0..n {
        if alpha[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * gram[(i, j)];
        }
    }
    0.5 * quad - alpha.iter().sum::<f64>()
}

/// A fitted two-class machine; labels are +1 / -1.
#[derive(Debug, Clone, PartialEq)]
pub struct BinarySvm {
    pub kernel: KernelSpec,
    pub cost: f64,
    /// Dual coefficients of every training point.
    pub alpha: Vec<f64>,
    pub labels: Vec<f64>,
    /// The bias `a_0` in `f(x) = sum_j a_j y_j k(x, x_j) + a_0`.
    pub bias: f64,
    /// Training indices with positive `a_i`.
    pub support: Vec<usize>,
    support_vectors: Vec<Vec<f64>>,
    /// `a_i y_i` for each support vector.
    coefficients: Vec<f64>,
    pub iterations: usize,
    pub violation: f64,
}

pub fn fit_svm_binary(points: &[Vec<f64>], labels: &[f64], config: &SvmConfig) -> Result<BinarySvm> {
    config.validate()?;
    check_dim(points.len(), labels.len())?;
    let gram = config.kernel.gram(points);
    fit_with_gram(points, labels, &gram, config)
}

fn fit_with_gram(points: &[Vec<f64>], labels: &[f64], gram: &Matrix, config: &SvmConfig) -> Result<BinarySvm> {
    if let Some(bad) = labels.iter().find(|&&v| v != 1.0 && v != -1.0) {
        return Err(Error::InvalidArgument(format!("binary SVM labels must be +1 or -1, got {bad}")));
    }
    if !(labels.contains(&1.0) && labels.contains(&-1.0)) {
        return Err(Error::SingleClassInput);
    }
    let sol = solve_dual(gram, labels, config.cost, config.tolerance, config.max_iterations)?;
    let support: Vec<usize> = (0..labels.len()).filter(|&i| sol.alpha[i] > 0.0).collect();
    Ok(BinarySvm {
        kernel: config.kernel,
        cost: config.cost,
        support_vectors: support.iter().map(|&i| points[i].clone()).collect(),
        coefficients: support.iter().map(|&i| sol.alpha[i] * labels[i]).collect(),
        support,
        alpha: sol.alpha,
        labels: labels.to_vec(),
        bias: -sol.rho,
        iterations: sol.iterations,
        violation: sol.violation,
    })
}

impl BinarySvm {
    pub fn dim(&self) -> usize {
        self.support_vectors.first().map_or(0, Vec::len)
    }

    pub fn support_vectors(&self) -> &[Vec<f64>] {
        &self.support_vectors
    }

    /// `f(x)`; its sign is the predicted label and its size the confidence.
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self
            .support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, c)| c * self.kernel.eval(x, sv))
            .sum::<f64>()
            + self.bias)
    }
}

/// One binary machine of a multiclass model; `negative == None` means "all other classes".
#[derive(Debug, Clone, PartialEq)]
pub struct Machine {
    pub positive: usize,
    pub negative: Option<usize>,
    pub svm: BinarySvm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub strategy: Strategy,
    pub machines: Vec<Machine>,
    n_classes: usize,
    dim: usize,
}

/// Fits one machine per class (one-vs-rest) or per class pair (one-vs-one).
///
/// With two classes both strategies train the single machine "class 0 vs class 1".
pub fn fit_svm_multiclass(train: &Dataset, config: &SvmConfig) -> Result<SvmModel> {
    config.validate()?;
    let n_classes = train.n_classes();
    let points = train.features();
    let labels = train.labels();
    let gram = config.kernel.gram(points);

    let tasks: Vec<(usize, Option<usize>)> = if n_classes == 2 {
        vec![(0, Some(1))]
    } else {
        match config.strategy {
            Strategy::OneVsRest => (0..n_classes).map(|j| (j, None)).collect(),
            Strategy::OneVsOne => (0..n_classes)
                .flat_map(|a| ((a + 1)..n_classes).map(move |b| (a, Some(b))))
                .collect(),
        }
    };

    let machines = tasks
        .into_par_iter()
        .map(|(positive, negative)| {
            let svm = match negative {
                None => {
                    let y: Vec<f64> = labels.iter().map(|&l| if l == positive { 1.0 } else { -1.0 }).collect();
                    fit_with_gram(points, &y, &gram, config)?
                }
                Some(neg) => {
                    let idx: Vec<usize> = (0..labels.len())
                        .filter(|&i| labels[i] == positive || labels[i] == neg)
                        .collect();
                    let sub_points: Vec<Vec<f64>> = idx.iter().map(|&i| points[i].clone()).collect();
                    let y: Vec<f64> = idx.iter().map(|&i| if labels[i] == positive { 1.0 } else { -1.0 }).collect();
                    let mut sub = Matrix::zeros(idx.len(), idx.len());
                    for (a, &ia) in idx.iter().enumerate() {
                        for (b, &ib) in idx.iter().enumerate() {
                            sub[(a, b)] = gram[(ia, ib)];
                        }
                    }
                    fit_with_gram(&sub_points, &y, &sub, config)?
                }
            };
            Ok(Machine { positive, negative, svm })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SvmModel {
        strategy: config.strategy,
        machines,
        n_classes,
        dim: train.dim(),
    })
}

impl TrainedClassifier for SvmModel {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn dim(&self) -> usize {
        self.dim
    }

    /// One-vs-rest: per-class decision values. One-vs-one: vote counts plus a
    /// term in (-1/2, 1/2) increasing in the summed decision values, so votes
    /// decide first and the decision sum breaks ties.
    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        if self.n_classes == 2 {
            let f = self.machines[0].svm.decision(x)?;
            return Ok(vec![f, -f]);
        }
        match self.strategy {
            Strategy::OneVsRest => self.machines.iter().map(|m| m.svm.decision(x)).collect(),
            Strategy::OneVsOne => {
                let mut votes = vec![0.0; self.n_classes];
                let mut sums = vec![0.0; self.n_classes];
                for m in &self.machines {
                    let neg = m.negative.expect("pairwise machine");
                    let f = m.svm.decision(x)?;
                    sums[m.positive] += f;
                    sums[neg] -= f;
                    if f >= 0.0 {
                        votes[m.positive] += 1.0;
                    } else {
                        votes[neg] += 1.0;
                    }
                }
                Ok(votes
                    .iter()
                    .zip(&sums)
                    .map(|(v, s)| v + s.atan() / std::f64::consts::PI)
                    .collect())
            }
        }
    }
}
