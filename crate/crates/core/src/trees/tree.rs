//! Binary decision trees grown greedily with a bound on the number of splits.

use std::fmt::Write as _;

use super::impurity::{impurity_of_counts, SplitCriterion};
use crate::domain::{argmax, Dataset, TrainedClassifier};
use crate::error::{check_dim, Error, Result};

/// Default bound on the number of splits.
pub const DEFAULT_MAX_SPLITS: usize = 20;

/// Scores closer than this (relative) are treated as tied.
const SCORE_TIE_TOLERANCE: f64 = 1e-12;

/// `x[feature] < threshold` goes left, everything else right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRule {
    pub feature: usize,
    pub threshold: f64,
}

impl SplitRule {
    pub fn goes_left(&self, x: &[f64]) -> bool {
        x[self.feature] < self.threshold
    }
}

/// Score of a split given the class counts of the parent and of the left
/// child: the impurity decrease, or the twoing value
/// `p_L p_R (sum_j |p(j|R) - p(j|L)|)^2`.
pub fn split_score(criterion: SplitCriterion, parent: &[usize], left: &[usize], n_left: usize, n: usize) -> f64 {
    let n_right = n - n_left;
    let p_l = n_left as f64 / n as f64;
    let p_r = n_right as f64 / n as f64;
    match criterion.impurity_measure() {
        Some(m) => {
            let right: Vec<usize> = parent.iter().zip(left).map(|(p, l)| p - l).collect();
            impurity_of_counts(m, parent, n) - p_l * impurity_of_counts(m, left, n_left) - p_r * impurity_of_counts(m, &right, n_right)
        }
        None => {
            let s: f64 = parent
                .iter()
                .zip(left)
                .map(|(&p, &l)| ((p - l) as f64 / n_right as f64 - l as f64 / n_left as f64).abs())
                .sum();
            p_l * p_r * s * s
        }
    }
}

fn better(score: f64, best: f64) -> bool {
    score > best + SCORE_TIE_TOLERANCE * best.abs().max(1.0)
}

/// Exhaustive search over every feature and every midpoint between
/// consecutive distinct values of the node's samples.
pub fn best_split<V: AsRef<[f64]>>(
    points: &[V],
    labels: &[usize],
    n_classes: usize,
    criterion: SplitCriterion,
) -> Result<(SplitRule, f64)> {
    check_dim(points.len(), labels.len())?;
    if points.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let n = points.len();
    let mut parent = vec![0; n_classes];
    for &y in labels {
        parent[y] += 1;
    }
    if parent.iter().filter(|&&c| c > 0).count() <= 1 {
        return Err(Error::PureNode);
    }
    let d = points[0].as_ref().len();
    let mut best: Option<(SplitRule, f64)> = None;
    let mut order: Vec<usize> = (0..n).collect();
    for feature in 0..d {
        let value = |i: usize| points[i].as_ref()[feature];
        order.sort_by(|&a, &b| value(a).total_cmp(&value(b)).then(a.cmp(&b)));
        let mut left = vec![0; n_classes];
        for pos in 0..n - 1 {
            left[labels[order[pos]]] += 1;
            let (lo, hi) = (value(order[pos]), value(order[pos + 1]));
            if lo == hi {
                continue;
            }
            let threshold = lo + 0.5 * (hi - lo);
            let score = split_score(criterion, &parent, &left, pos + 1, n);
            if best.is_none_or(|(_, b)| better(score, b)) {
                best = Some((SplitRule { feature, threshold }, score));
            }
        }
    }
    best.ok_or(Error::NoValidSplit)
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Split { rule: SplitRule, left: usize, right: usize },
    Leaf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub kind: NodeKind,
    /// Training class counts reaching this node.
    pub counts: Vec<usize>,
    /// Majority class, lowest index on ties.
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTreeModel {
    /// Breadth-first order, root first.
    pub nodes: Vec<TreeNode>,
    pub criterion: SplitCriterion,
    pub max_splits: usize,
    dim: usize,
}

fn majority(counts: &[usize]) -> usize {
    let c: Vec<f64> = counts.iter().map(|&v| v as f64).collect();
    argmax(&c)
}

/// Grows a tree breadth-first until every open node is pure or unsplittable
/// or `max_splits` splits have been made.
pub fn fit_tree(train: &Dataset, criterion: SplitCriterion, max_splits: usize) -> Result<DecisionTreeModel> {
    fit_tree_on(train.features(), train.labels(), train.n_classes(), criterion, max_splits)
}

pub(crate) fn fit_tree_on(
    points: &[Vec<f64>],
    labels: &[usize],
    n_classes: usize,
    criterion: SplitCriterion,
    max_splits: usize,
) -> Result<DecisionTreeModel> {
    check_dim(points.len(), labels.len())?;
    if points.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if max_splits == 0 {
        return Err(Error::InvalidArgument("max_splits must be at least 1".into()));
    }
    let counts_of = |idx: &[usize]| {
        let mut c = vec![0; n_classes];
        for &i in idx {
            c[labels[i]] += 1;
        }
        c
    };
    let root: Vec<usize> = (0..points.len()).collect();
    let counts = counts_of(&root);
    let mut nodes = vec![TreeNode {
        kind: NodeKind::Leaf,
        label: majority(&counts),
        counts,
    }];
    let mut members = vec![root];
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut splits = 0;
    while let Some(id) = queue.pop_front() {
        if splits >= max_splits {
            break;
        }
        let idx = std::mem::take(&mut members[id]);
        let sub_points: Vec<&[f64]> = idx.iter().map(|&i| points[i].as_slice()).collect();
        let sub_labels: Vec<usize> = idx.iter().map(|&i| labels[i]).collect();
        let (rule, score) = match best_split(&sub_points, &sub_labels, n_classes, criterion) {
            Ok(found) => found,
            Err(Error::PureNode | Error::NoValidSplit) => continue,
            Err(e) => return Err(e),
        };
        if criterion != SplitCriterion::Twoing {
            debug_assert!(score >= -1e-12, "negative purity gain {score}");
        }
        let (l_idx, r_idx): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| rule.goes_left(&points[i]));
        let (left, right) = (nodes.len(), nodes.len() + 1);
        for child in [&l_idx, &r_idx] {
            let counts = counts_of(child);
            nodes.push(TreeNode {
                kind: NodeKind::Leaf,
                label: majority(&counts),
                counts,
            });
        }
        nodes[id].kind = NodeKind::Split { rule, left, right };
        members.push(l_idx);
        members.push(r_idx);
        queue.push_back(left);
        queue.push_back(right);
        splits += 1;
    }
    Ok(DecisionTreeModel {
        nodes,
        criterion,
        max_splits,
        dim: points[0].len(),
    })
}

impl DecisionTreeModel {
    pub fn n_splits(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n.kind, NodeKind::Split { .. })).count()
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.len() - self.n_splits()
    }

    /// Index of the leaf that `x` is routed to.
    pub fn leaf(&self, x: &[f64]) -> Result<usize> {
        check_dim(self.dim, x.len())?;
        let mut id = 0;
        while let NodeKind::Split { rule, left, right } = &self.nodes[id].kind {
            id = if rule.goes_left(x) { *left } else { *right };
        }
        Ok(id)
    }

    /// Human-readable rule table: one line per node, numbered from 1 in
    /// breadth-first order.
    pub fn rule_table(&self, feature_names: &[String], class_names: &[String]) -> String {
        let mut out = String::from("node  rule\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let line = match &node.kind {
                NodeKind::Split { rule, left, right } => {
                    let name = feature_names.get(rule.feature).cloned().unwrap_or_else(|| format!("x{}", rule.feature + 1));
                    format!(
                        "if {name}<{t} then node {l} elseif {name}>={t} then node {r} else {c}",
                        t = rule.threshold,
                        l = left + 1,
                        r = right + 1,
                        c = class_name(class_names, node.label)
                    )
                }
                NodeKind::Leaf => format!("class = {}", class_name(class_names, node.label)),
            };
            let _ = writeln!(out, "{:<4}  {line}", i + 1);
        }
        out
    }
}

fn class_name(names: &[String], j: usize) -> String {
    names.get(j).cloned().unwrap_or_else(|| format!("c{j}"))
}

/// The leaf label reached by `x`.
pub fn tree_classify(model: &DecisionTreeModel, x: &[f64]) -> Result<usize> {
    Ok(model.nodes[model.leaf(x)?].label)
}

impl TrainedClassifier for DecisionTreeModel {
    fn n_classes(&self) -> usize {
        self.nodes[0].counts.len()
    }

    fn dim(&self) -> usize {
        self.dim
    }

    /// One-hot on the leaf label.
    fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut s = vec![0.0; self.n_classes()];
        s[tree_classify(self, x)?] = 1.0;
        Ok(s)
    }
}
