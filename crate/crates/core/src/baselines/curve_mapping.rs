use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BucketStatistic {
    Mean,
    /// Middle value; an even-sized bucket averages its middle pair.
    Median,
}

impl fmt::Display for BucketStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BucketStatistic::Mean => "mean",
            BucketStatistic::Median => "median",
        })
    }
}

impl FromStr for BucketStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(BucketStatistic::Mean),
            "median" => Ok(BucketStatistic::Median),
            _ => Err(Error::InvalidArgument(format!("unknown bucket statistic '{s}'"))),
        }
    }
}

/// Proxy spread of a bucket of liquid spreads.
pub fn curve_mapping_proxy(bucket: &[f64], statistic: BucketStatistic) -> Result<f64> {
    if bucket.is_empty() {
        return Err(Error::EmptyBucket);
    }
    match statistic {
        BucketStatistic::Mean => Ok(bucket.iter().sum::<f64>() / bucket.len() as f64),
        BucketStatistic::Median => {
            let mut sorted = bucket.to_vec();
            sorted.sort_by(f64::total_cmp);
            let n = sorted.len();
            Ok(if n % 2 == 1 {
                sorted[n / 2]
            } else {
                0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
            })
        }
    }
}
