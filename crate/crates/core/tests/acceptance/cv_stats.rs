//! Cross-validation bookkeeping replayed by hand.

use cdsproxy::datagen::{generate_panel, GeneratorConfig};
use cdsproxy::domain::{build_dataset, Dataset, FeatureSelection, TrainedClassifier};
use cdsproxy::evaluation::{cross_validate, stratified_folds};
use cdsproxy::registry::{derive_seed, ClassifierSpec, Learner};
use cdsproxy::Result;

use crate::Outcome;

struct Constant(usize);

impl TrainedClassifier for Constant {
    fn n_classes(&self) -> usize {
        self.0
    }
    fn dim(&self) -> usize {
        1
    }
    fn scores(&self, _: &[f64]) -> Result<Vec<f64>> {
        let mut s = vec![0.0; self.0];
        s[0] = 1.0;
        Ok(s)
    }
}

struct AlwaysFirst;

impl Learner for AlwaysFirst {
    fn label(&self) -> String {
        "constant".into()
    }
    fn fit(&self, train: &Dataset, _: u64) -> Result<Box<dyn TrainedClassifier>> {
        Ok(Box::new(Constant(train.n_classes())))
    }
}

pub fn criterion() -> Outcome {
    let panel = generate_panel(&GeneratorConfig::default()).unwrap().observables();
    let ds = build_dataset(&panel, FeatureSelection::Fs1).unwrap();
    let (mut worst, mut replay_ok, mut runs) = (0.0f64, true, 0);
    for (label, k, seed) in [("LDA-FullCov", 10, 3), ("kNN-Euclidean", 5, 8), ("DT-Gini", 7, 1), ("NB-tria-kernel", 10, 42)] {
        let spec = ClassifierSpec::from_label(label).unwrap();
        let result = cross_validate(&spec, &ds, k, seed).unwrap();
        let plan = stratified_folds(&ds, k, seed).unwrap();
        let mut errors = Vec::new();
        for fold in 0..k {
            let model = spec.fit(&ds.subset(&plan.training(fold)), derive_seed(seed, fold as u64)).unwrap();
            let holdout = plan.holdout(fold);
            let wrong = holdout
                .iter()
                .filter(|&&i| model.classify(ds.x(i)).unwrap() != ds.labels()[i])
                .count();
            errors.push(wrong as f64 / holdout.len() as f64);
        }
        replay_ok &= errors == result.errors;
        let mean = result.errors.iter().sum::<f64>() / k as f64;
        let sd = (result.errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / k as f64).sqrt();
        worst = worst.max((mean - result.mean).abs()).max((sd - result.sd).abs());
        runs += 1;
    }

    let balanced = Dataset::from_labels((0..90).map(|i| vec![i as f64]).collect(), (0..90).map(|i| i % 3).collect(), 3).unwrap();
    let mut constant = Vec::new();
    for (k, seed) in [(3, 0), (5, 1), (10, 2), (15, 3), (30, 4)] {
        constant.push(cross_validate(&AlwaysFirst, &balanced, k, seed).unwrap().mean);
    }
    let exact = constant.iter().all(|&u| u == 2.0 / 3.0);
    Outcome::new(
        replay_ok && worst <= 1e-12 && exact,
        format!(
            "{runs} runs replayed fold by fold ({}), max |mean/sd deviation| {worst:.1e}; constant predictor on balanced 3-class set: {}",
            if replay_ok { "identical errors" } else { "errors differ" },
            if exact { "2/3 exactly for K in 3,5,10,15,30".to_string() } else { format!("{constant:?}") }
        ),
    )
}
