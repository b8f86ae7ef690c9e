//! Stratified cross validation, classifier ranking, the PCA study and the
//! feature-correlation diagnostic.

pub mod correlation;
pub mod cv;
pub mod folds;
pub mod grid;
pub mod pca_study;
pub mod ranking;
pub mod report;

pub use correlation::{correlation_histogram, pearson, CorrelationHistogram};
pub use cv::{cross_validate, cross_validate_with_plan, mean_and_population_sd, CvResult, DEFAULT_FOLDS};
pub use folds::{stratified_folds, FoldPlan};
pub use grid::run_grid;
pub use pca_study::{pca_study, PcaLearner, PcaStudy};
pub use ranking::{rank_classifiers, RankingRow, RankingTable};
