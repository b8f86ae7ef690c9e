//! Classifier specifications addressed by their table labels, and the
//! fit-time feature preprocessing each family gets.

use std::fmt;
use std::str::FromStr;

use crate::bayes::{fit_lda, fit_nb, fit_qda, Kernel, DEFAULT_BANDWIDTH};
use crate::domain::{Dataset, PriorMode, TrainedClassifier};
use crate::error::{Error, Result};
use crate::geometric::{
    default_gaussian_c, fit_knn, fit_svm_multiclass, KernelSpec, Metric, Strategy, SvmConfig, DEFAULT_COST, DEFAULT_K,
    DEFAULT_POLY_DEGREE,
};
use crate::numerics::{CovarianceMode, Standardizer};
use crate::parametric::{fit_logistic_multiclass, fit_neural_net, Activation, LogisticConfig, NnConfig};
use crate::trees::{fit_bagged, fit_tree, SplitCriterion, TreeConfig, DEFAULT_LEARNING_CYCLES, DEFAULT_MAX_SPLITS};

/// SMO stopping tolerance used by the table classifiers. The cubic kernel
/// on heavy-tailed features produces Gram entries near 1e5, where an
/// absolute KKT gap of 1e-6 sits at the rounding level of the gradient.
pub const GRID_SVM_TOLERANCE: f64 = 1e-3;

/// Every classifier label, in table order.
pub const CLASSIFIER_LABELS: [&str; 21] = [
    "LDA-FullCov",
    "LDA-DiagonalCov",
    "QDA-FullCov",
    "QDA-DiagonalCov",
    "NB-norm-kernel",
    "NB-tria-kernel",
    "NB-epan-kernel",
    "kNN-Euclidean",
    "kNN-CityBlock",
    "kNN-Mahalanobis",
    "LR",
    "DT-Gini",
    "DT-Entropy",
    "DT-Twoing",
    "SVM-Linear",
    "SVM-Gaussian",
    "SVM-Poly",
    "NN-Tangent",
    "NN-Linear",
    "NN-Elliot",
    "BaggedTree",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SvmKernelKind {
    Linear,
    Gaussian,
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Lda(CovarianceMode),
    Qda(CovarianceMode),
    NaiveBayes(Kernel),
    Knn(Metric),
    LogisticRegression,
    DecisionTree(SplitCriterion),
    Svm(SvmKernelKind),
    NeuralNet(Activation),
    BaggedTree,
}

impl Family {
    /// Name of the family group used for per-family report tables.
    pub fn group(self) -> &'static str {
        match self {
            Family::Lda(_) | Family::Qda(_) => "DA",
            Family::NaiveBayes(_) => "NB",
            Family::Knn(_) => "kNN",
            Family::LogisticRegression => "LR",
            Family::DecisionTree(_) => "DT",
            Family::Svm(_) => "SVM",
            Family::NeuralNet(_) => "NN",
            Family::BaggedTree => "BaggedTree",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::Lda(CovarianceMode::Full) => "LDA-FullCov",
            Family::Lda(CovarianceMode::Diagonal) => "LDA-DiagonalCov",
            Family::Qda(CovarianceMode::Full) => "QDA-FullCov",
            Family::Qda(CovarianceMode::Diagonal) => "QDA-DiagonalCov",
            Family::NaiveBayes(Kernel::Normal) => "NB-norm-kernel",
            Family::NaiveBayes(Kernel::Triangular) => "NB-tria-kernel",
            Family::NaiveBayes(Kernel::Epanechnikov) => "NB-epan-kernel",
            Family::Knn(Metric::Euclidean) => "kNN-Euclidean",
            Family::Knn(Metric::CityBlock) => "kNN-CityBlock",
            Family::Knn(Metric::Mahalanobis) => "kNN-Mahalanobis",
            Family::LogisticRegression => "LR",
            Family::DecisionTree(SplitCriterion::Gini) => "DT-Gini",
            Family::DecisionTree(SplitCriterion::Entropy) => "DT-Entropy",
            Family::DecisionTree(SplitCriterion::Twoing) => "DT-Twoing",
            Family::Svm(SvmKernelKind::Linear) => "SVM-Linear",
            Family::Svm(SvmKernelKind::Gaussian) => "SVM-Gaussian",
            Family::Svm(SvmKernelKind::Polynomial) => "SVM-Poly",
            Family::NeuralNet(Activation::Tanh) => "NN-Tangent",
            Family::NeuralNet(Activation::Linear) => "NN-Linear",
            Family::NeuralNet(Activation::Elliot) => "NN-Elliot",
            Family::BaggedTree => "BaggedTree",
        }
    }

    /// Scale-sensitive families see standardized features, fitted on the
    /// training data only.
    pub fn standardizes(self) -> bool {
        matches!(
            self,
            Family::Knn(Metric::Euclidean | Metric::CityBlock)
                | Family::Svm(_)
                | Family::LogisticRegression
                | Family::NeuralNet(_)
        )
    }

    /// Whether fitting consumes randomness.
    pub fn is_stochastic(self) -> bool {
        matches!(self, Family::NeuralNet(_) | Family::BaggedTree)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let family = match s {
            "LDA-FullCov" => Family::Lda(CovarianceMode::Full),
            "LDA-DiagonalCov" => Family::Lda(CovarianceMode::Diagonal),
            "QDA-FullCov" => Family::Qda(CovarianceMode::Full),
            "QDA-DiagonalCov" => Family::Qda(CovarianceMode::Diagonal),
            "NB-norm-kernel" => Family::NaiveBayes(Kernel::Normal),
            "NB-tria-kernel" => Family::NaiveBayes(Kernel::Triangular),
            "NB-epan-kernel" => Family::NaiveBayes(Kernel::Epanechnikov),
            "kNN-Euclidean" => Family::Knn(Metric::Euclidean),
            "kNN-CityBlock" => Family::Knn(Metric::CityBlock),
            "kNN-Mahalanobis" => Family::Knn(Metric::Mahalanobis),
            "LR" => Family::LogisticRegression,
            "DT-Gini" => Family::DecisionTree(SplitCriterion::Gini),
            "DT-Entropy" => Family::DecisionTree(SplitCriterion::Entropy),
            "DT-Twoing" => Family::DecisionTree(SplitCriterion::Twoing),
            "SVM-Linear" => Family::Svm(SvmKernelKind::Linear),
            "SVM-Gaussian" => Family::Svm(SvmKernelKind::Gaussian),
            "SVM-Poly" => Family::Svm(SvmKernelKind::Polynomial),
            "NN-Tangent" => Family::NeuralNet(Activation::Tanh),
            "NN-Linear" => Family::NeuralNet(Activation::Linear),
            "NN-Elliot" => Family::NeuralNet(Activation::Elliot),
            "BaggedTree" => Family::BaggedTree,
            _ => return Err(Error::UnknownClassifier(s.to_string())),
        };
        Ok(family)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Tunable parameters. Each family reads only the fields it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparameters {
    /// Kernel bandwidth `b` for naive Bayes.
    pub bandwidth: f64,
    /// Neighbourhood size for kNN.
    pub k: usize,
    /// Split bound `z` for single trees.
    pub max_splits: usize,
    /// Learning cycles `B` for bagging.
    pub cycles: usize,
    /// Box constraint `C` for the SVM.
    pub cost: f64,
    /// Gaussian kernel width; `None` means `1 / (2 d)`.
    pub gaussian_c: Option<f64>,
    pub poly_degree: u32,
    pub svm_strategy: Strategy,
    /// KKT violation at which the SMO solver stops.
    pub svm_tolerance: f64,
    /// Hidden units `h`.
    pub hidden: usize,
    pub max_epochs: usize,
    pub logistic_penalty: f64,
    pub prior: PriorMode,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Self {
            bandwidth: DEFAULT_BANDWIDTH,
            k: DEFAULT_K,
            max_splits: DEFAULT_MAX_SPLITS,
            cycles: DEFAULT_LEARNING_CYCLES,
            cost: DEFAULT_COST,
            gaussian_c: None,
            poly_degree: DEFAULT_POLY_DEGREE,
            svm_strategy: Strategy::OneVsRest,
            svm_tolerance: GRID_SVM_TOLERANCE,
            hidden: crate::parametric::neural::DEFAULT_HIDDEN,
            max_epochs: crate::parametric::neural::DEFAULT_MAX_EPOCHS,
            logistic_penalty: crate::parametric::logistic::DEFAULT_PENALTY,
            prior: PriorMode::Empirical,
        }
    }
}

impl Hyperparameters {
    /// Checks the values before any fitting starts.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::BadConfig(m));
        if !(self.bandwidth > 0.0) || !self.bandwidth.is_finite() {
            return bad(format!("bandwidth b must be positive, got {}", self.bandwidth));
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.max_splits == 0 {
            return bad("z must be at least 1".into());
        }
        if self.cycles == 0 {
            return bad("B must be at least 1".into());
        }
        if !(self.cost > 0.0) || !self.cost.is_finite() {
            return bad(format!("C must be positive, got {}", self.cost));
        }
        if let Some(c) = self.gaussian_c {
            if !(c > 0.0) || !c.is_finite() {
                return bad(format!("Gaussian kernel width must be positive, got {c}"));
            }
        }
        if !(self.svm_tolerance > 0.0) {
            return bad(format!("SVM tolerance must be positive, got {}", self.svm_tolerance));
        }
        if self.poly_degree == 0 {
            return bad("polynomial degree must be at least 1".into());
        }
        if self.hidden == 0 {
            return bad("h must be at least 1".into());
        }
        if self.max_epochs == 0 {
            return bad("epoch cap must be at least 1".into());
        }
        if !(self.logistic_penalty >= 0.0) {
            return bad(format!("logistic penalty must be non-negative, got {}", self.logistic_penalty));
        }
        Ok(())
    }
}

/// Anything that can be trained on a dataset. `seed` feeds stochastic fits.
pub trait Learner: Send + Sync {
    fn label(&self) -> String;

    fn fit(&self, train: &Dataset, seed: u64) -> Result<Box<dyn TrainedClassifier>>;
}

/// A family together with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifierSpec {
    pub family: Family,
    pub params: Hyperparameters,
}

impl ClassifierSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            params: Hyperparameters::default(),
        }
    }

    pub fn from_label(label: &str) -> Result<Self> {
        Ok(Self::new(label.parse()?))
    }

    pub fn with_params(mut self, params: Hyperparameters) -> Self {
        self.params = params;
        self
    }

    /// All table classifiers with default parameters.
    pub fn all() -> Vec<ClassifierSpec> {
        CLASSIFIER_LABELS.iter().map(|l| Self::from_label(l).expect("known label")).collect()
    }

    /// Fits on `train`, standardizing first when the family calls for it.
    pub fn fit_standardized(&self, train: &Dataset, seed: u64) -> Result<FittedClassifier> {
        self.params.validate()?;
        let (standardizer, data) = if self.family.standardizes() {
            let s = Standardizer::fit(train.features())?;
            let names = train.feature_names().to_vec();
            let data = train.map_features(names, |x| s.apply(x))?;
            (Some(s), data)
        } else {
            (None, train.clone())
        };
        let model = self.fit_raw(&data, seed)?;
        Ok(FittedClassifier {
            label: self.family.label(),
            standardizer,
            model,
        })
    }

    fn fit_raw(&self, train: &Dataset, seed: u64) -> Result<Box<dyn TrainedClassifier>> {
        let p = &self.params;
        Ok(match self.family {
            Family::Lda(mode) => Box::new(fit_lda(train, mode, p.prior)?),
            Family::Qda(mode) => Box::new(fit_qda(train, mode, p.prior)?),
            Family::NaiveBayes(kernel) => Box::new(fit_nb(train, kernel, p.bandwidth, p.prior)?),
            Family::Knn(metric) => Box::new(fit_knn(train, p.k.min(train.len()), metric)?),
            Family::LogisticRegression => {
                let cfg = LogisticConfig {
                    penalty: p.logistic_penalty,
                    ..LogisticConfig::default()
                };
                Box::new(fit_logistic_multiclass(train, &cfg)?)
            }
            Family::DecisionTree(criterion) => Box::new(fit_tree(train, criterion, p.max_splits)?),
            Family::Svm(kind) => {
                let kernel = match kind {
                    SvmKernelKind::Linear => KernelSpec::Linear,
                    SvmKernelKind::Gaussian => KernelSpec::Gaussian {
                        c: p.gaussian_c.unwrap_or_else(|| default_gaussian_c(train.dim())),
                    },
                    SvmKernelKind::Polynomial => KernelSpec::Polynomial { degree: p.poly_degree },
                };
                let cfg = SvmConfig {
                    cost: p.cost,
                    strategy: p.svm_strategy,
                    tolerance: p.svm_tolerance,
                    ..SvmConfig::new(kernel)
                };
                Box::new(fit_svm_multiclass(train, &cfg)?)
            }
            Family::NeuralNet(activation) => {
                let cfg = NnConfig {
                    hidden: p.hidden,
                    max_epochs: p.max_epochs,
                    ..NnConfig::new(activation, seed)
                };
                Box::new(fit_neural_net(train, &cfg)?)
            }
            Family::BaggedTree => Box::new(fit_bagged(train, p.cycles, TreeConfig::default(), seed)?),
        })
    }
}

impl Learner for ClassifierSpec {
    fn label(&self) -> String {
        self.family.label().to_string()
    }

    fn fit(&self, train: &Dataset, seed: u64) -> Result<Box<dyn TrainedClassifier>> {
        Ok(Box::new(self.fit_standardized(train, seed)?))
    }
}

/// A fitted model plus the standardizer applied in front of it, if any.
pub struct FittedClassifier {
    pub label: &'static str,
    pub standardizer: Option<Standardizer>,
    pub model: Box<dyn TrainedClassifier>,
}

impl TrainedClassifier for FittedClassifier {
    fn n_classes(&self) -> usize {
        self.model.n_classes()
    }

    fn dim(&self) -> usize {
        self.model.dim()
    }

    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        match &self.standardizer {
            Some(s) => self.model.scores(&s.apply(x)?),
            None => self.model.scores(x),
        }
    }
}

/// Decorrelated child seed for stream `stream` of `master` (SplitMix64 finalizer).
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
