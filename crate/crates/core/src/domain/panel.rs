//! Per-counterparty daily market panel.

use std::collections::BTreeMap;

use chrono::NaiveDate;

use super::features::RawFeature;
use crate::error::{Error, Result};

/// Region / sector / rating / seniority codes used by the incumbent proxy methods.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Categories {
    pub region: String,
    pub sector: String,
    pub rating: String,
    pub seniority: String,
}

impl Categories {
    pub const NAMES: [&'static str; 4] = ["region", "sector", "rating", "seniority"];

    pub fn levels(&self) -> [&str; 4] {
        [&self.region, &self.sector, &self.rating, &self.seniority]
    }
}

/// One counterparty-day.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelRow {
    pub counterparty: usize,
    pub date: NaiveDate,
    /// 5-year CDS rate in basis points; `None` when not quoted.
    pub s: Option<f64>,
    /// The other fifteen variables in [`RawFeature::MARKET`] order.
    pub market: [f64; 15],
}

impl PanelRow {
    pub fn value(&self, feature: RawFeature) -> Option<f64> {
        match feature.market_index() {
            None => self.s,
            Some(i) => Some(self.market[i]),
        }
    }
}

/// A row before counterparty names are resolved to indices.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelRecord {
    pub counterparty: String,
    pub date: NaiveDate,
    pub s: Option<f64>,
    pub market: [f64; 15],
    pub categories: Option<Categories>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarketPanel {
    counterparties: Vec<String>,
    categories: Vec<Option<Categories>>,
    dates: Vec<NaiveDate>,
    rows: Vec<PanelRow>,
}

/// Checks the range invariants of one value; `row` is used for diagnostics.
pub fn validate_value(row: usize, feature: RawFeature, value: f64) -> Result<()> {
    let ok = value.is_finite()
        && value >= 0.0
        && (!feature.is_probability() || value <= 1.0);
    if ok {
        Ok(())
    } else {
        Err(Error::RangeViolation {
            row,
            column: feature.column_name().to_string(),
            value,
        })
    }
}

impl MarketPanel {
    /// Builds a panel, sorting counterparties by name and rows by (counterparty, date).
    ///
    /// Range violations report the 1-based position of the offending record.
    pub fn from_records(records: Vec<PanelRecord>) -> Result<Self> {
        let mut cats: BTreeMap<String, Option<Categories>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            let row = i + 1;
            if r.counterparty.is_empty() {
                return Err(Error::SchemaViolation {
                    row,
                    column: "counterparty".into(),
                    message: "empty counterparty name".into(),
                });
            }
            if let Some(s) = r.s {
                validate_value(row, RawFeature::S, s)?;
            }
            for (f, v) in RawFeature::MARKET.iter().zip(&r.market) {
                validate_value(row, *f, *v)?;
            }
            match cats.get(&r.counterparty) {
                None => {
                    cats.insert(r.counterparty.clone(), r.categories.clone());
                }
                Some(existing) if *existing != r.categories => {
                    return Err(Error::SchemaViolation {
                        row,
                        column: "region".into(),
                        message: format!("inconsistent categories for '{}'", r.counterparty),
                    });
                }
                Some(_) => {}
            }
        }
        let counterparties: Vec<String> = cats.keys().cloned().collect();
        let categories: Vec<Option<Categories>> = cats.into_values().collect();
        let mut rows: Vec<PanelRow> = records
            .into_iter()
            .map(|r| PanelRow {
                counterparty: counterparties
                    .binary_search(&r.counterparty)
                    .expect("name collected above"),
                date: r.date,
                s: r.s,
                market: r.market,
            })
            .collect();
        rows.sort_by(|a, b| (a.counterparty, a.date).cmp(&(b.counterparty, b.date)));
        for w in rows.windows(2) {
            if w[0].counterparty == w[1].counterparty && w[0].date == w[1].date {
                return Err(Error::SchemaViolation {
                    row: 0,
                    column: "date".into(),
                    message: format!(
                        "duplicate row for '{}' on {}",
                        counterparties[w[0].counterparty], w[0].date
                    ),
                });
            }
        }
        let mut dates: Vec<NaiveDate> = rows.iter().map(|r| r.date).collect();
        dates.sort();
        dates.dedup();
        Ok(Self {
            counterparties,
            categories,
            dates,
            rows,
        })
    }

    pub fn counterparties(&self) -> &[String] {
        &self.counterparties
    }

    pub fn categories(&self, counterparty: usize) -> Option<&Categories> {
        self.categories.get(counterparty).and_then(Option::as_ref)
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn rows(&self) -> &[PanelRow] {
        &self.rows
    }

    pub fn rows_mut(&mut self) -> &mut [PanelRow] {
        &mut self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows_of(&self, counterparty: usize) -> impl Iterator<Item = &PanelRow> {
        self.rows.iter().filter(move |r| r.counterparty == counterparty)
    }

    pub fn has_missing_rate(&self) -> bool {
        self.rows.iter().any(|r| r.s.is_none())
    }

    /// Counterparties with a quoted 5-year rate on every one of their rows.
    pub fn is_observable(&self, counterparty: usize) -> bool {
        let mut any = false;
        for r in self.rows_of(counterparty) {
            any = true;
            if r.s.is_none() {
                return false;
            }
        }
        any
    }

    /// Sub-panel with the counterparties for which `keep(index)` holds.
    pub fn select(&self, keep: impl Fn(usize) -> bool) -> MarketPanel {
        let records = self
            .rows
            .iter()
            .filter(|r| keep(r.counterparty))
            .map(|r| self.record(r))
            .collect();
        MarketPanel::from_records(records).expect("subset of a valid panel is valid")
    }

    pub fn observables(&self) -> MarketPanel {
        self.select(|c| self.is_observable(c))
    }

    pub fn nonobservables(&self) -> MarketPanel {
        self.select(|c| !self.is_observable(c))
    }

    pub fn record(&self, row: &PanelRow) -> PanelRecord {
        PanelRecord {
            counterparty: self.counterparties[row.counterparty].clone(),
            date: row.date,
            s: row.s,
            market: row.market,
            categories: self.categories[row.counterparty].clone(),
        }
    }

    pub fn to_records(&self) -> Vec<PanelRecord> {
        self.rows.iter().map(|r| self.record(r)).collect()
    }

    pub fn has_categories(&self) -> bool {
        self.categories.iter().all(Option::is_some)
    }
}
