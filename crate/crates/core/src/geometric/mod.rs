//! Distance- and margin-based classifiers: k-nearest neighbours and kernel SVMs.

pub mod kernel;
pub mod knn;
pub mod svm;

pub use kernel::KernelSpec;
pub use knn::{distance, fit_knn, KnnModel, Metric, DEFAULT_K};
pub use svm::{
    default_gaussian_c, fit_svm_binary, fit_svm_multiclass, BinarySvm, Strategy, SvmConfig, SvmModel,
    DEFAULT_COST, DEFAULT_POLY_DEGREE,
};
