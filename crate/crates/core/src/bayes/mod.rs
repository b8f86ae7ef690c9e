//! Bayes-rule classifiers: linear and quadratic discriminant analysis and
//! kernel-density naive Bayes.

pub mod discriminant;
pub mod kde;
pub mod naive_bayes;

pub use discriminant::{fit_lda, fit_qda, LdaModel, QdaModel};
pub use kde::{kde_log_density, Kernel, LOG_DENSITY_FLOOR};
pub use naive_bayes::{fit_gaussian_nb, fit_nb, GaussianNbModel, NbModel, DEFAULT_BANDWIDTH};
