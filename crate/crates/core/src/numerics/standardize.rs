use crate::error::{check_dim, Error, Result};

use super::covariance::sample_mean;

/// Smallest scale a column may get; constant columns map to zero.
pub const MIN_SCALE: f64 = 1e-12;

/// Per-column centering and scaling by the sample standard deviation (`n - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub scales: Vec<f64>,
}

impl Standardizer {
    pub fn fit<V: AsRef<[f64]>>(vectors: &[V]) -> Result<Self> {
        if vectors.len() < 2 {
            return Err(Error::FewerThanTwoSamples(vectors.len()));
        }
        let d = vectors[0].as_ref().len();
        let (means, n) = sample_mean(vectors.iter().map(AsRef::as_ref), d)?;
        let mut ss = vec![0.0; d];
        for v in vectors {
            for ((s, x), m) in ss.iter_mut().zip(v.as_ref()).zip(&means) {
                *s += (x - m) * (x - m);
            }
        }
        let scales = ss
            .into_iter()
            .map(|s| (s / (n - 1) as f64).sqrt().max(MIN_SCALE))
            .collect();
        Ok(Self { means, scales })
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        Ok(x.iter()
            .zip(&self.means)
            .zip(&self.scales)
            .map(|((v, m), s)| (v - m) / s)
            .collect())
    }

    pub fn invert(&self, z: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), z.len())?;
        Ok(z.iter()
            .zip(&self.means)
            .zip(&self.scales)
            .map(|((v, m), s)| v * s + m)
            .collect())
    }
}

pub fn standardizer_fit<V: AsRef<[f64]>>(vectors: &[V]) -> Result<Standardizer> {
    Standardizer::fit(vectors)
}

pub fn standardizer_apply(s: &Standardizer, x: &[f64]) -> Result<Vec<f64>> {
    s.apply(x)
}
