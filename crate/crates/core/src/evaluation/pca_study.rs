use super::cv::{cross_validate_with_plan, CvResult};
use super::folds::stratified_folds;
use crate::domain::{Dataset, TrainedClassifier};
use crate::error::{Error, Result};
use crate::numerics::{pca_fit, PrincipalComponentBasis};
use crate::registry::Learner;

/// Wraps a learner so it sees the first `components` principal-component
/// coordinates, with the basis fitted on the training data it is given.
pub struct PcaLearner<'a> {
    pub inner: &'a dyn Learner,
    pub components: usize,
}

impl Learner for PcaLearner<'_> {
    fn label(&self) -> String {
        self.inner.label()
    }

    fn fit(&self, train: &Dataset, seed: u64) -> Result<Box<dyn TrainedClassifier>> {
        let basis = pca_fit(train.features())?;
        let m = self.components;
        let names = (1..=m).map(|i| format!("PC{i}")).collect();
        let projected = train.map_features(names, |x| basis.transform(x, m))?;
        let model = self.inner.fit(&projected, seed)?;
        Ok(Box::new(PcaModel { basis, components: m, model }))
    }
}

struct PcaModel {
    basis: PrincipalComponentBasis,
    components: usize,
    model: Box<dyn TrainedClassifier>,
}

impl TrainedClassifier for PcaModel {
    fn n_classes(&self) -> usize {
        self.model.n_classes()
    }

    fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.model.scores(&self.basis.transform(x, self.components)?)
    }
}

/// Cross-validated accuracy on `m = 1..=d` principal components and on the
/// untransformed features, all with the same fold plan.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaStudy {
    pub classifier: String,
    pub selection: Option<String>,
    /// `by_components[m - 1]` uses `m` components.
    pub by_components: Vec<CvResult>,
    pub raw: CvResult,
}

impl PcaStudy {
    pub fn accuracy(&self, m: usize) -> f64 {
        self.by_components[m - 1].accuracy()
    }

    /// Accuracy with all components minus accuracy on the raw features.
    pub fn full_minus_raw(&self) -> f64 {
        self.by_components.last().map_or(f64::NAN, CvResult::accuracy) - self.raw.accuracy()
    }
}

pub fn pca_study(learner: &dyn Learner, dataset: &Dataset, k: usize, seed: u64) -> Result<PcaStudy> {
    let d = dataset.dim();
    if d < 2 {
        return Err(Error::InvalidArgument(format!("PCA study needs at least 2 features, got {d}")));
    }
    let plan = stratified_folds(dataset, k, seed)?;
    let by_components = (1..=d)
        .map(|m| cross_validate_with_plan(&PcaLearner { inner: learner, components: m }, dataset, &plan))
        .collect::<Result<Vec<_>>>()?;
    let raw = cross_validate_with_plan(learner, dataset, &plan)?;
    Ok(PcaStudy {
        classifier: learner.label(),
        selection: dataset.selection().map(|s| s.label().to_string()),
        by_components,
        raw,
    })
}
