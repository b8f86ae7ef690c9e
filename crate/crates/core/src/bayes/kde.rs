//! Parzen kernel density estimation in one dimension.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Lower bound on any returned log-density, just above `ln(f64::MIN_POSITIVE)`.
pub const LOG_DENSITY_FLOOR: f64 = -745.0;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Unit-integral smoothing kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// Standard normal density.
    Normal,
    /// `1 - |u|` on `[-1, 1]`.
    Triangular,
    /// `3/4 (1 - u^2)` on `[-1, 1]`.
    Epanechnikov,
}

impl Kernel {
    pub fn eval(self, u: f64) -> f64 {
        match self {
            Kernel::Normal => (-0.5 * u * u - LN_SQRT_2PI).exp(),
            Kernel::Triangular => (1.0 - u.abs()).max(0.0),
            Kernel::Epanechnikov => (0.75 * (1.0 - u * u)).max(0.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Kernel::Normal => "norm",
            Kernel::Triangular => "tria",
            Kernel::Epanechnikov => "epan",
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "norm" | "normal" => Ok(Kernel::Normal),
            "tria" | "triangular" | "triangle" => Ok(Kernel::Triangular),
            "epan" | "epanechnikov" => Ok(Kernel::Epanechnikov),
            _ => Err(Error::InvalidArgument(format!("unknown kernel '{s}'"))),
        }
    }
}

/// `log( sum_i K((x - x_i) / b) / (n b) )`, floored at [`LOG_DENSITY_FLOOR`].
pub fn kde_log_density(samples: &[f64], kernel: Kernel, bandwidth: f64, x: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::NonpositiveBandwidth(bandwidth));
    }
    Ok(log_density_unchecked(samples, kernel, bandwidth, x))
}

pub(crate) fn log_density_unchecked(samples: &[f64], kernel: Kernel, bandwidth: f64, x: f64) -> f64 {
    let norm = (samples.len() as f64 * bandwidth).ln();
    let value = match kernel {
        Kernel::Normal => {
            // log-sum-exp keeps far-away points from underflowing to -inf
            let mut max = f64::NEG_INFINITY;
            for &xi in samples {
                let u = (x - xi) / bandwidth;
                max = max.max(-0.5 * u * u);
            }
            let sum: f64 = samples
                .iter()
                .map(|&xi| {
                    let u = (x - xi) / bandwidth;
                    (-0.5 * u * u - max).exp()
                })
                .sum();
            max + sum.ln() - LN_SQRT_2PI - norm
        }
        Kernel::Triangular | Kernel::Epanechnikov => {
            let sum: f64 = samples.iter().map(|&xi| kernel.eval((x - xi) / bandwidth)).sum();
            sum.ln() - norm
        }
    };
    if value.is_nan() {
        LOG_DENSITY_FLOOR
    } else {
        value.max(LOG_DENSITY_FLOOR)
    }
}
