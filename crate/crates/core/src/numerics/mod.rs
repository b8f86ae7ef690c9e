//! Dense linear algebra for the small symmetric problems every classifier needs.
//!
//! Dimensions here are tiny (at most sixteen features), so everything is a
//! plain row-major `Vec<f64>` and the algorithms favour determinism over speed.

pub mod cholesky;
pub mod covariance;
pub mod eigen;
pub mod matrix;
pub mod pca;
pub mod regression;
pub mod standardize;

pub use cholesky::{solve_spd, Cholesky};
pub use covariance::{ridge_epsilon, sample_mean_covariance, CovarianceEstimate, CovarianceMode};
pub use eigen::{eigen_symmetric, EigenDecomposition};
pub use matrix::{dot, norm2, Matrix};
pub use pca::{pca_fit, pca_transform, PrincipalComponentBasis};
pub use regression::ridge_least_squares;
pub use standardize::{standardizer_apply, standardizer_fit, Standardizer};
