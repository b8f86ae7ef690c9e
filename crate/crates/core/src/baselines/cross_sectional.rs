//! `log S = b0 + sum over categories of b_c[level]`, fitted by OLS with the
//! first (lexicographically smallest) level of every category as reference.

use std::collections::BTreeSet;

use crate::domain::Categories;
use crate::error::{Error, Result};
use crate::numerics::{eigen_symmetric, ridge_least_squares, Matrix};

const SOLVE_RIDGE: f64 = 1e-8;
/// Smallest admissible eigenvalue of `X^T X` relative to the largest.
const RANK_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CdsContractRecord {
    /// Spread in basis points.
    pub spread: f64,
    pub categories: Categories,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossSectionalModel {
    pub intercept: f64,
    /// Per category (region, sector, rating, seniority), the levels seen in
    /// training in sorted order; the first is the reference.
    pub levels: [Vec<String>; 4],
    /// Coefficient of each non-reference level, aligned with `levels[c][1..]`.
    pub coefficients: [Vec<f64>; 4],
}

fn design_width(levels: &[Vec<String>; 4]) -> usize {
    1 + levels.iter().map(|l| l.len() - 1).sum::<usize>()
}

fn design_row(levels: &[Vec<String>; 4], cats: &Categories) -> Result<Vec<f64>> {
    let mut row = vec![0.0; design_width(levels)];
    row[0] = 1.0;
    let mut offset = 1;
    for (c, level) in cats.levels().iter().enumerate() {
        let pos = levels[c]
            .binary_search_by(|l| l.as_str().cmp(level))
            .map_err(|_| Error::UnknownCategoryLevel {
                category: Categories::NAMES[c].to_string(),
                level: level.to_string(),
            })?;
        if pos > 0 {
            row[offset + pos - 1] = 1.0;
        }
        offset += levels[c].len() - 1;
    }
    Ok(row)
}

pub fn fit_cross_sectional(records: &[CdsContractRecord]) -> Result<CrossSectionalModel> {
    if records.is_empty() {
        return Err(Error::RankDeficientDesign);
    }
    let mut sets: [BTreeSet<String>; 4] = Default::default();
    for r in records {
        if !(r.spread > 0.0 && r.spread.is_finite()) {
            return Err(Error::InvalidArgument(format!("spread must be positive, got {}", r.spread)));
        }
        for (c, level) in r.categories.levels().iter().enumerate() {
            sets[c].insert(level.to_string());
        }
    }
    let levels: [Vec<String>; 4] = sets.map(|s| s.into_iter().collect());
    let p = design_width(&levels);
    if records.len() < p {
        return Err(Error::RankDeficientDesign);
    }
    let design = records
        .iter()
        .map(|r| design_row(&levels, &r.categories))
        .collect::<Result<Vec<_>>>()?;
    let mut xtx = Matrix::zeros(p, p);
    for row in &design {
        for i in 0..p {
            for j in 0..p {
                xtx[(i, j)] += row[i] * row[j];
            }
        }
    }
    let eig = eigen_symmetric(&xtx)?;
    let largest = eig.eigenvalues[0];
    if eig.eigenvalues[p - 1] <= RANK_TOLERANCE * largest {
        return Err(Error::RankDeficientDesign);
    }
    let y: Vec<f64> = records.iter().map(|r| r.spread.ln()).collect();
    let beta = ridge_least_squares(&design, &y, SOLVE_RIDGE)?;
    if beta.iter().any(|b| !b.is_finite()) {
        return Err(Error::RankDeficientDesign);
    }
    let mut coefficients: [Vec<f64>; 4] = Default::default();
    let mut offset = 1;
    for c in 0..4 {
        let w = levels[c].len() - 1;
        coefficients[c] = beta[offset..offset + w].to_vec();
        offset += w;
    }
    Ok(CrossSectionalModel {
        intercept: beta[0],
        levels,
        coefficients,
    })
}

impl CrossSectionalModel {
    /// Fitted log-spread for a category combination.
    pub fn predict_log(&self, categories: &Categories) -> Result<f64> {
        let row = design_row(&self.levels, categories)?;
        Ok(row.iter().zip(self.flat_coefficients()).map(|(x, b)| x * b).sum())
    }

    /// Proxy spread in basis points.
    pub fn predict(&self, categories: &Categories) -> Result<f64> {
        Ok(self.predict_log(categories)?.exp())
    }

    /// Intercept followed by the non-reference coefficients in design order.
    pub fn flat_coefficients(&self) -> Vec<f64> {
        std::iter::once(self.intercept)
            .chain(self.coefficients.iter().flatten().copied())
            .collect()
    }
}
