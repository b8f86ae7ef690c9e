//! Multiclass classification toolkit for building CDS proxies.
//!
//! Illiquid counterparties are mapped to liquid ones by training classifiers on
//! market features of the liquid names and predicting a class for the illiquid
//! name. The crate provides the classifier families, a stratified
//! cross-validation harness, PCA tooling, the two incumbent proxy baselines and
//! a seeded synthetic panel generator.

pub mod baselines;
pub mod bayes;
pub mod cli;
pub mod datagen;
pub mod domain;
pub mod error;
pub mod evaluation;
pub mod geometric;
pub mod numerics;
pub mod parametric;
pub mod registry;
pub mod trees;

pub use error::{Error, Result};
