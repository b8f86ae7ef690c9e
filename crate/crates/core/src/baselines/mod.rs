//! The two incumbent proxy methods: bucket averages (curve mapping) and a
//! log-linear regression of spreads on category dummies.

mod cross_sectional;
mod curve_mapping;

pub use cross_sectional::{fit_cross_sectional, CdsContractRecord, CrossSectionalModel};
pub use curve_mapping::{curve_mapping_proxy, BucketStatistic};
