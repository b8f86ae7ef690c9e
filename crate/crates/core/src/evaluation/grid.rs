//! The classifier by feature-selection grid behind the ranking table.

use rayon::prelude::*;

use super::cv::{cross_validate, CvResult};
use crate::domain::{build_dataset, Dataset, FeatureSelection, MarketPanel};
use crate::error::Result;
use crate::registry::ClassifierSpec;

/// Cross-validates every `(spec, selection)` pair on the observables of
/// `panel`. All cells share `seed`, so every classifier sees the same folds
/// for a given selection. Results are ordered by spec, then selection.
pub fn run_grid(
    panel: &MarketPanel,
    specs: &[ClassifierSpec],
    selections: &[FeatureSelection],
    k: usize,
    seed: u64,
) -> Result<Vec<CvResult>> {
    for spec in specs {
        spec.params.validate()?;
    }
    let observables = panel.observables();
    let datasets = selections
        .iter()
        .map(|&fs| build_dataset(&observables, fs))
        .collect::<Result<Vec<Dataset>>>()?;
    let cells: Vec<(usize, usize)> = (0..specs.len())
        .flat_map(|c| (0..selections.len()).map(move |f| (c, f)))
        .collect();
    cells
        .into_par_iter()
        .map(|(c, f)| cross_validate(&specs[c], &datasets[f], k, seed))
        .collect()
}
