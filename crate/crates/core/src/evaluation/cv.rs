use rayon::prelude::*;

use super::folds::{stratified_folds, FoldPlan};
use crate::domain::Dataset;
use crate::error::{Error, Result};
use crate::registry::{derive_seed, Learner};

/// Default number of folds.
pub const DEFAULT_FOLDS: usize = 10;

/// Holdout misclassification rates of one cross-validation run.
#[derive(Debug, Clone, PartialEq)]
pub struct CvResult {
    pub classifier: String,
    /// Feature selection label such as `FS4`, if the data came from one.
    pub selection: Option<String>,
    pub k: usize,
    pub seed: u64,
    /// Per-fold misclassification rates.
    pub errors: Vec<f64>,
    /// Mean of `errors`.
    pub mean: f64,
    /// Population standard deviation of `errors` (divides by K).
    pub sd: f64,
}

/// `(mean, population sd)` of a slice. The mean is accumulated as an offset
/// from the first value, so equal values give that value back exactly.
pub fn mean_and_population_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let first = values.first().copied().unwrap_or(f64::NAN);
    let mean = first + values.iter().map(|v| v - first).sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl CvResult {
    pub fn from_errors(classifier: impl Into<String>, selection: Option<String>, seed: u64, errors: Vec<f64>) -> Self {
        let (mean, sd) = mean_and_population_sd(&errors);
        Self {
            classifier: classifier.into(),
            selection,
            k: errors.len(),
            seed,
            errors,
            mean,
            sd,
        }
    }

    /// Estimated accuracy, `1 - mean`.
    pub fn accuracy(&self) -> f64 {
        1.0 - self.mean
    }
}

/// Stratified K-fold cross validation of `learner` on `dataset`.
///
/// Each fold fits on the other folds only. Stochastic learners get a seed
/// derived from `seed` and the fold index.
pub fn cross_validate(learner: &dyn Learner, dataset: &Dataset, k: usize, seed: u64) -> Result<CvResult> {
    let plan = stratified_folds(dataset, k, seed)?;
    cross_validate_with_plan(learner, dataset, &plan)
}

pub fn cross_validate_with_plan(learner: &dyn Learner, dataset: &Dataset, plan: &FoldPlan) -> Result<CvResult> {
    let errors = (0..plan.k)
        .into_par_iter()
        .map(|fold| {
            holdout_error(learner, dataset, plan, fold).map_err(|e| Error::FitFailure {
                fold,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(CvResult::from_errors(
        learner.label(),
        dataset.selection().map(|s| s.label().to_string()),
        plan.seed,
        errors,
    ))
}

fn holdout_error(learner: &dyn Learner, dataset: &Dataset, plan: &FoldPlan, fold: usize) -> Result<f64> {
    let train = dataset.subset(&plan.training(fold));
    let holdout = plan.holdout(fold);
    let model = learner.fit(&train, derive_seed(plan.seed, fold as u64))?;
    let mut wrong = 0usize;
    for &i in &holdout {
        if model.classify(dataset.x(i))? != dataset.labels()[i] {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / holdout.len() as f64)
}
