//! Decision trees and bagged tree ensembles.

pub mod bagging;
pub mod impurity;
pub mod tree;

pub use bagging::{bootstrap_indices, fit_bagged, BaggedTreeModel, TreeConfig, DEFAULT_LEARNING_CYCLES};
pub use impurity::{impurity, ImpurityMeasure, SplitCriterion};
pub use tree::{best_split, fit_tree, split_score, tree_classify, DecisionTreeModel, NodeKind, SplitRule, TreeNode, DEFAULT_MAX_SPLITS};
