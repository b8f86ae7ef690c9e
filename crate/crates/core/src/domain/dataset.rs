//! Labeled feature vectors and empirical class priors.

use super::features::FeatureSelection;
use super::panel::MarketPanel;
use crate::error::{Error, Result};

/// Labeled training data; labels are 0-based indices into `class_names`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
    class_names: Vec<String>,
    feature_names: Vec<String>,
    selection: Option<FeatureSelection>,
}

impl Dataset {
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<usize>, class_names: Vec<String>) -> Result<Self> {
        let d = features.first().map_or(0, Vec::len);
        let names = (0..d).map(|j| format!("x{}", j + 1)).collect();
        Self::with_feature_names(features, labels, class_names, names)
    }

    /// Convenience constructor naming classes `c0`, `c1`, ...
    pub fn from_labels(features: Vec<Vec<f64>>, labels: Vec<usize>, n_classes: usize) -> Result<Self> {
        let names = (0..n_classes).map(|j| format!("c{j}")).collect();
        Self::new(features, labels, names)
    }

    pub fn with_feature_names(
        features: Vec<Vec<f64>>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        feature_names: Vec<String>,
    ) -> Result<Self> {
        if class_names.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a dataset needs at least two classes, got {}",
                class_names.len()
            )));
        }
        if features.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: features.len(),
                actual: labels.len(),
            });
        }
        let d = feature_names.len();
        for x in &features {
            crate::error::check_dim(d, x.len())?;
        }
        if let Some(&bad) = labels.iter().find(|&&y| y >= class_names.len()) {
            return Err(Error::InvalidArgument(format!(
                "label {bad} outside 0..{}",
                class_names.len()
            )));
        }
        Ok(Self {
            features,
            labels,
            class_names,
            feature_names,
            selection: None,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn selection(&self) -> Option<FeatureSelection> {
        self.selection
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }

    /// Indices of the samples of each class, in dataset order.
    pub fn class_indices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_classes()];
        for (i, &y) in self.labels.iter().enumerate() {
            out[y].push(i);
        }
        out
    }

    /// Samples at `indices` (repeats allowed), keeping the class list.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
            feature_names: self.feature_names.clone(),
            selection: self.selection,
        }
    }

    /// Applies `f` to every feature vector; `names` describe the new coordinates.
    pub fn map_features<F>(&self, names: Vec<String>, mut f: F) -> Result<Dataset>
    where
        F: FnMut(&[f64]) -> Result<Vec<f64>>,
    {
        let features = self
            .features
            .iter()
            .map(|x| {
                let y = f(x)?;
                crate::error::check_dim(names.len(), y.len())?;
                Ok(y)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            features,
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
            feature_names: names,
            selection: None,
        })
    }
}

/// One sample per (counterparty, date), columns in the order of the selection.
pub fn build_dataset(panel: &MarketPanel, selection: FeatureSelection) -> Result<Dataset> {
    let columns = selection.columns();
    let mut features = Vec::with_capacity(panel.len());
    let mut labels = Vec::with_capacity(panel.len());
    for row in panel.rows() {
        let x = columns
            .iter()
            .map(|&c| row.value(c))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::MissingFiveYearRate(selection.label().to_string()))?;
        features.push(x);
        labels.push(row.counterparty);
    }
    let names = columns.iter().map(|c| c.column_name().to_string()).collect();
    let mut ds = Dataset::with_feature_names(features, labels, panel.counterparties().to_vec(), names)?;
    ds.selection = Some(selection);
    Ok(ds)
}

/// Class prior probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassPriors {
    pi: Vec<f64>,
}

impl ClassPriors {
    /// `n_j / n`; every class must be present.
    pub fn empirical(labels: &[usize], n_classes: usize) -> Result<Self> {
        let mut counts = vec![0usize; n_classes];
        for &y in labels {
            counts[y] += 1;
        }
        if let Some(j) = counts.iter().position(|&c| c == 0) {
            return Err(Error::EmptyClass(j));
        }
        let n = labels.len() as f64;
        Ok(Self {
            pi: counts.into_iter().map(|c| c as f64 / n).collect(),
        })
    }

    pub fn uniform(n_classes: usize) -> Self {
        Self {
            pi: vec![1.0 / n_classes as f64; n_classes],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.pi
    }

    pub fn log(&self, class: usize) -> f64 {
        self.pi[class].ln()
    }
}

/// Whether a family uses empirical or equal class priors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PriorMode {
    #[default]
    Empirical,
    Uniform,
}

impl PriorMode {
    pub fn priors(self, train: &Dataset) -> Result<ClassPriors> {
        match self {
            PriorMode::Empirical => ClassPriors::empirical(train.labels(), train.n_classes()),
            PriorMode::Uniform => Ok(ClassPriors::uniform(train.n_classes())),
        }
    }
}

impl std::str::FromStr for PriorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "empirical" => Ok(PriorMode::Empirical),
            "uniform" | "equal" => Ok(PriorMode::Uniform),
            _ => Err(Error::InvalidArgument(format!("unknown prior '{s}'"))),
        }
    }
}
