//! Raw market variables and the six fixed feature selections built from them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// One of the sixteen per-day market variables carried by a panel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RawFeature {
    /// 5-year CDS rate in basis points.
    S,
    Pd6m,
    Pd1y,
    Pd2y,
    Pd3y,
    Pd4y,
    Pd5y,
    Iv3m,
    Iv6m,
    Iv12m,
    Iv18m,
    Hv1m,
    Hv2m,
    Hv3m,
    Hv4m,
    Hv6m,
}

impl RawFeature {
    pub const ALL: [RawFeature; 16] = [
        RawFeature::S,
        RawFeature::Pd6m,
        RawFeature::Pd1y,
        RawFeature::Pd2y,
        RawFeature::Pd3y,
        RawFeature::Pd4y,
        RawFeature::Pd5y,
        RawFeature::Iv3m,
        RawFeature::Iv6m,
        RawFeature::Iv12m,
        RawFeature::Iv18m,
        RawFeature::Hv1m,
        RawFeature::Hv2m,
        RawFeature::Hv3m,
        RawFeature::Hv4m,
        RawFeature::Hv6m,
    ];

    /// The fifteen variables other than the CDS rate, in storage order.
    pub const MARKET: [RawFeature; 15] = [
        RawFeature::Pd6m,
        RawFeature::Pd1y,
        RawFeature::Pd2y,
        RawFeature::Pd3y,
        RawFeature::Pd4y,
        RawFeature::Pd5y,
        RawFeature::Iv3m,
        RawFeature::Iv6m,
        RawFeature::Iv12m,
        RawFeature::Iv18m,
        RawFeature::Hv1m,
        RawFeature::Hv2m,
        RawFeature::Hv3m,
        RawFeature::Hv4m,
        RawFeature::Hv6m,
    ];

    /// Column name in the panel CSV schema.
    pub fn column_name(self) -> &'static str {
        match self {
            RawFeature::S => "s",
            RawFeature::Pd6m => "pd_6m",
            RawFeature::Pd1y => "pd_1y",
            RawFeature::Pd2y => "pd_2y",
            RawFeature::Pd3y => "pd_3y",
            RawFeature::Pd4y => "pd_4y",
            RawFeature::Pd5y => "pd_5y",
            RawFeature::Iv3m => "iv_3m",
            RawFeature::Iv6m => "iv_6m",
            RawFeature::Iv12m => "iv_12m",
            RawFeature::Iv18m => "iv_18m",
            RawFeature::Hv1m => "hv_1m",
            RawFeature::Hv2m => "hv_2m",
            RawFeature::Hv3m => "hv_3m",
            RawFeature::Hv4m => "hv_4m",
            RawFeature::Hv6m => "hv_6m",
        }
    }

    pub fn from_column_name(name: &str) -> Option<RawFeature> {
        RawFeature::ALL.into_iter().find(|f| f.column_name() == name)
    }

    /// Position among [`RawFeature::MARKET`], `None` for the CDS rate.
    pub fn market_index(self) -> Option<usize> {
        match self {
            RawFeature::S => None,
            other => Some(other as usize - 1),
        }
    }

    pub fn is_probability(self) -> bool {
        matches!(
            self,
            RawFeature::Pd6m
                | RawFeature::Pd1y
                | RawFeature::Pd2y
                | RawFeature::Pd3y
                | RawFeature::Pd4y
                | RawFeature::Pd5y
        )
    }
}

/// The feature selections FS1 to FS6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeatureSelection {
    Fs1,
    Fs2,
    Fs3,
    Fs4,
    Fs5,
    Fs6,
}

use RawFeature::*;

const FS1: [RawFeature; 16] = [
    S, Pd6m, Pd1y, Pd2y, Pd3y, Pd4y, Pd5y, Iv3m, Iv6m, Iv12m, Iv18m, Hv1m, Hv2m, Hv3m, Hv4m, Hv6m,
];
const FS2: [RawFeature; 4] = [S, Pd5y, Iv6m, Hv4m];
const FS3: [RawFeature; 2] = [S, Pd5y];
const FS4: [RawFeature; 15] = [
    Pd6m, Pd1y, Pd2y, Pd3y, Pd4y, Pd5y, Iv3m, Iv6m, Iv12m, Iv18m, Hv1m, Hv2m, Hv3m, Hv4m, Hv6m,
];
const FS5: [RawFeature; 3] = [Pd5y, Iv6m, Hv4m];
const FS6: [RawFeature; 2] = [Pd1y, Pd5y];

impl FeatureSelection {
    pub const ALL: [FeatureSelection; 6] = [
        FeatureSelection::Fs1,
        FeatureSelection::Fs2,
        FeatureSelection::Fs3,
        FeatureSelection::Fs4,
        FeatureSelection::Fs5,
        FeatureSelection::Fs6,
    ];

    pub fn columns(self) -> &'static [RawFeature] {
        match self {
            FeatureSelection::Fs1 => &FS1,
            FeatureSelection::Fs2 => &FS2,
            FeatureSelection::Fs3 => &FS3,
            FeatureSelection::Fs4 => &FS4,
            FeatureSelection::Fs5 => &FS5,
            FeatureSelection::Fs6 => &FS6,
        }
    }

    pub fn dim(self) -> usize {
        self.columns().len()
    }

    pub fn uses_five_year_rate(self) -> bool {
        self.columns().contains(&RawFeature::S)
    }

    pub fn label(self) -> &'static str {
        match self {
            FeatureSelection::Fs1 => "FS1",
            FeatureSelection::Fs2 => "FS2",
            FeatureSelection::Fs3 => "FS3",
            FeatureSelection::Fs4 => "FS4",
            FeatureSelection::Fs5 => "FS5",
            FeatureSelection::Fs6 => "FS6",
        }
    }

    /// 1-based number, as in the `FSn` label.
    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_number(n: u8) -> Option<FeatureSelection> {
        FeatureSelection::ALL.get((n as usize).checked_sub(1)?).copied()
    }
}

impl fmt::Display for FeatureSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FeatureSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t
            .strip_prefix("FS")
            .or_else(|| t.strip_prefix("fs"))
            .unwrap_or(t);
        digits
            .parse::<u8>()
            .ok()
            .and_then(FeatureSelection::from_number)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown feature selection '{s}'")))
    }
}
