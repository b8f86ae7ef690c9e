use std::fmt;

use crate::numerics::{dot, Matrix};

/// Positive semidefinite kernels for the SVM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `x^T y`.
    Linear,
    /// `exp(-c |x - y|^2)`.
    Gaussian { c: f64 },
    /// `(1 + x^T y)^p`.
    Polynomial { degree: u32 },
}

impl KernelSpec {
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        match *self {
            KernelSpec::Linear => dot(x, y),
            KernelSpec::Gaussian { c } => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-c * d2).exp()
            }
            KernelSpec::Polynomial { degree } => (1.0 + dot(x, y)).powi(degree as i32),
        }
    }

    pub fn gram<V: AsRef<[f64]>>(&self, points: &[V]) -> Matrix {
        let n = points.len();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.eval(points[i].as_ref(), points[j].as_ref());
                g[(i, j)] = v;
                g[(j, i)] = v;
            }
        }
        g
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Linear => write!(f, "linear"),
            KernelSpec::Gaussian { c } => write!(f, "gaussian(c={c})"),
            KernelSpec::Polynomial { degree } => write!(f, "polynomial(p={degree})"),
        }
    }
}
