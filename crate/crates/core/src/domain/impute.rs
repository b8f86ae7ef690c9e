//! Two-stage filling of missing 5-year CDS rates.
//!
//! `log(s)` is regressed on the market variables of a rate-free feature
//! selection over all rows where `s` is quoted; missing rates are then set to
//! `exp` of the fitted value.

use super::features::FeatureSelection;
use super::panel::MarketPanel;
use crate::error::{Error, Result};
use crate::numerics::ridge_least_squares;

/// Relative ridge on the normal equations.
pub const IMPUTATION_RIDGE: f64 = 1e-8;

/// Fitted coefficients of the rate regression, intercept first.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegression {
    pub basis: FeatureSelection,
    pub coefficients: Vec<f64>,
}

impl RateRegression {
    pub fn fit(panel: &MarketPanel, basis: FeatureSelection) -> Result<Self> {
        if basis.uses_five_year_rate() {
            return Err(Error::BadConfig(format!(
                "imputation basis {basis} contains the 5-year rate itself"
            )));
        }
        let d = basis.dim();
        let mut design = Vec::new();
        let mut target = Vec::new();
        for row in panel.rows() {
            if let Some(s) = row.s {
                if s <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "cannot take the log of a non-positive 5-year rate ({s})"
                    )));
                }
                design.push(design_row(row, basis));
                target.push(s.ln());
            }
        }
        if design.len() < d + 2 {
            return Err(Error::InsufficientObservedRates {
                observed: design.len(),
                required: d + 2,
            });
        }
        let coefficients =
            ridge_least_squares(&design, &target, IMPUTATION_RIDGE).map_err(|_| Error::SingularDesign)?;
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::SingularDesign);
        }
        Ok(Self { basis, coefficients })
    }

    pub fn predict_log(&self, row: &super::panel::PanelRow) -> f64 {
        design_row(row, self.basis)
            .iter()
            .zip(&self.coefficients)
            .map(|(a, b)| a * b)
            .sum()
    }
}

fn design_row(row: &super::panel::PanelRow, basis: FeatureSelection) -> Vec<f64> {
    std::iter::once(1.0)
        .chain(basis.columns().iter().map(|&c| row.value(c).expect("basis has no rate column")))
        .collect()
}

/// Returns a copy of `panel` with every missing `s` imputed; quoted rates are untouched.
pub fn impute_five_year_rate(panel: &MarketPanel, basis: FeatureSelection) -> Result<MarketPanel> {
    if !panel.has_missing_rate() {
        return Ok(panel.clone());
    }
    let reg = RateRegression::fit(panel, basis)?;
    let mut out = panel.clone();
    for row in out.rows_mut() {
        if row.s.is_none() {
            row.s = Some(reg.predict_log(row).exp());
        }
    }
    Ok(out)
}
