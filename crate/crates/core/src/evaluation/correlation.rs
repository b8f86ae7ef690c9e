use crate::error::{Error, Result};

pub const BIN_COUNT: usize = 20;

/// Pairwise feature correlations binned into intervals of width 0.1 over
/// `[-1, 1]`; the last bin is closed.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationHistogram {
    pub counts: [usize; BIN_COUNT],
    /// Pairs involving a constant column.
    pub undefined: usize,
    /// Defined correlations, pair order `(0,1), (0,2), ..., (1,2), ...`.
    pub correlations: Vec<f64>,
}

impl CorrelationHistogram {
    pub fn bin_edges(i: usize) -> (f64, f64) {
        (-1.0 + 0.1 * i as f64, -1.0 + 0.1 * (i + 1) as f64)
    }

    /// Share of defined correlations that are at least `threshold`.
    pub fn fraction_at_least(&self, threshold: f64) -> f64 {
        if self.correlations.is_empty() {
            return 0.0;
        }
        self.correlations.iter().filter(|&&r| r >= threshold).count() as f64 / self.correlations.len() as f64
    }

    pub fn median_abs(&self) -> f64 {
        let mut a: Vec<f64> = self.correlations.iter().map(|r| r.abs()).collect();
        a.sort_by(f64::total_cmp);
        match a.len() {
            0 => f64::NAN,
            n if n % 2 == 1 => a[n / 2],
            n => 0.5 * (a[n / 2 - 1] + a[n / 2]),
        }
    }
}

/// Pearson correlation; `None` when either column is constant.
pub fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

fn bin_of(r: f64) -> usize {
    (((r + 1.0) * 10.0 + 1e-9).floor() as usize).min(BIN_COUNT - 1)
}

pub fn correlation_histogram<V: AsRef<[f64]>>(features: &[V]) -> Result<CorrelationHistogram> {
    if features.len() < 3 {
        return Err(Error::TooFewSamples {
            required: 3,
            actual: features.len(),
        });
    }
    let d = features[0].as_ref().len();
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 features, got {d}")));
    }
    let columns: Vec<Vec<f64>> = (0..d).map(|v| features.iter().map(|x| x.as_ref()[v]).collect()).collect();
    let mut hist = CorrelationHistogram {
        counts: [0; BIN_COUNT],
        undefined: 0,
        correlations: Vec::new(),
    };
    for i in 0..d {
        for j in i + 1..d {
            match pearson(&columns[i], &columns[j]) {
                Some(r) => {
                    hist.counts[bin_of(r)] += 1;
                    hist.correlations.push(r);
                }
                None => hist.undefined += 1,
            }
        }
    }
    Ok(hist)
}
