//! Bootstrap-aggregated decision trees voting by majority.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::impurity::SplitCriterion;
use super::tree::{fit_tree_on, tree_classify, DecisionTreeModel};
use crate::domain::{Dataset, TrainedClassifier};
use crate::error::{check_dim, Error, Result};

/// Default number of learning cycles.
pub const DEFAULT_LEARNING_CYCLES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeConfig {
    pub criterion: SplitCriterion,
    pub max_splits: usize,
}

impl Default for TreeConfig {
    /// Bagged trees are grown without a split bound.
    fn default() -> Self {
        Self {
            criterion: SplitCriterion::Gini,
            max_splits: usize::MAX,
        }
    }
}

/// Indices of the `n`-sample bootstrap draw for tree `t`. Each tree has its
/// own ChaCha stream keyed by `t`, so adding trees leaves earlier draws alone.
pub fn bootstrap_indices(seed: u64, t: usize, n: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaggedTreeModel {
    pub trees: Vec<DecisionTreeModel>,
    pub seed: u64,
}

pub fn fit_bagged(train: &Dataset, cycles: usize, config: TreeConfig, seed: u64) -> Result<BaggedTreeModel> {
    if cycles == 0 {
        return Err(Error::InvalidArgument("bagging needs at least one learning cycle".into()));
    }
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let n = train.len();
    let trees = (0..cycles)
        .into_par_iter()
        .map(|t| {
            let idx = bootstrap_indices(seed, t, n);
            let xs: Vec<Vec<f64>> = idx.iter().map(|&i| train.x(i).to_vec()).collect();
            let ys: Vec<usize> = idx.iter().map(|&i| train.labels()[i]).collect();
            fit_tree_on(&xs, &ys, train.n_classes(), config.criterion, config.max_splits)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BaggedTreeModel { trees, seed })
}

impl BaggedTreeModel {
    pub fn from_trees(trees: Vec<DecisionTreeModel>, seed: u64) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::InvalidArgument("bagging needs at least one tree".into()));
        }
        Ok(Self { trees, seed })
    }

    pub fn cycles(&self) -> usize {
        self.trees.len()
    }
}

impl TrainedClassifier for BaggedTreeModel {
    fn n_classes(&self) -> usize {
        self.trees[0].n_classes()
    }

    fn dim(&self) -> usize {
        self.trees[0].dim()
    }

    /// Number of trees voting for each class.
    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let mut votes = vec![0.0; self.n_classes()];
        for t in &self.trees {
            votes[tree_classify(t, x)?] += 1.0;
        }
        Ok(votes)
    }
}
