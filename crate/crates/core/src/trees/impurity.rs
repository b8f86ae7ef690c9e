use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Node impurity measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImpurityMeasure {
    Gini,
    Entropy,
}

/// How candidate splits are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitCriterion {
    Gini,
    Entropy,
    Twoing,
}

impl SplitCriterion {
    pub fn label(self) -> &'static str {
        match self {
            SplitCriterion::Gini => "Gini",
            SplitCriterion::Entropy => "Entropy",
            SplitCriterion::Twoing => "Twoing",
        }
    }

    pub fn impurity_measure(self) -> Option<ImpurityMeasure> {
        match self {
            SplitCriterion::Gini => Some(ImpurityMeasure::Gini),
            SplitCriterion::Entropy => Some(ImpurityMeasure::Entropy),
            SplitCriterion::Twoing => None,
        }
    }
}

impl fmt::Display for SplitCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SplitCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gini" => Ok(SplitCriterion::Gini),
            "entropy" | "deviance" => Ok(SplitCriterion::Entropy),
            "twoing" => Ok(SplitCriterion::Twoing),
            _ => Err(Error::InvalidArgument(format!("unknown split criterion '{s}'"))),
        }
    }
}

const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// Impurity of a vector of class proportions.
///
/// Gini is `1 - sum p_j^2`; entropy is `-sum p_j ln p_j` with `0 ln 0 = 0`.
pub fn impurity(measure: ImpurityMeasure, p: &[f64]) -> Result<f64> {
    let valid = p.iter().all(|&v| v >= 0.0 && v.is_finite())
        && (p.iter().sum::<f64>() - 1.0).abs() <= PROBABILITY_TOLERANCE;
    if !valid {
        return Err(Error::NotAProbabilityVector);
    }
    Ok(impurity_unchecked(measure, p))
}

pub(crate) fn impurity_unchecked(measure: ImpurityMeasure, p: &[f64]) -> f64 {
    match measure {
        ImpurityMeasure::Gini => 1.0 - p.iter().map(|v| v * v).sum::<f64>(),
        ImpurityMeasure::Entropy => -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>(),
    }
}

/// Impurity of the class distribution given by `counts`.
pub(crate) fn impurity_of_counts(measure: ImpurityMeasure, counts: &[usize], total: usize) -> f64 {
    let n = total as f64;
    match measure {
        ImpurityMeasure::Gini => 1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>(),
        ImpurityMeasure::Entropy => -counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                p * p.ln()
            })
            .sum::<f64>(),
    }
}
