//! Market panels, feature selections, labeled datasets and the classifier contract.
//!
//! Classes are the observable counterparties, ordered by name; internally
//! they are numbered from zero.

pub mod classifier;
pub mod dataset;
pub mod features;
pub mod impute;
pub mod panel;

pub use classifier::{argmax, classify, TrainedClassifier};
pub use dataset::{build_dataset, ClassPriors, Dataset, PriorMode};
pub use features::{FeatureSelection, RawFeature};
pub use impute::{impute_five_year_rate, RateRegression};
pub use panel::{Categories, MarketPanel, PanelRecord, PanelRow};
