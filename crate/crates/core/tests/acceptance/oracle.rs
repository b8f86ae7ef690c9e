//! Brute-force reference implementations shared by the checks. Nothing here
//! calls into the library's numerics.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<f64>>;

/// `|a - b| / max(1, |a|, |b|)`: relative for large values, absolute near zero.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(a: &Dense) -> Dense {
    let n = a.len();
    let mut m: Dense = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        m.swap(c, p);
        let pivot = m[c][c];
        for v in m[c].iter_mut() {
            *v /= pivot;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                if f != 0.0 {
                    for k in 0..2 * n {
                        m[r][k] -= f * m[c][k];
                    }
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// `ln det a` by LU elimination; `a` must have a positive determinant.
pub fn log_det(a: &Dense) -> f64 {
    let n = a.len();
    let mut m = a.clone();
    let mut acc = 0.0;
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        m.swap(c, p);
        acc += m[c][c].abs().ln();
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    acc
}

pub fn mat_vec(a: &Dense, x: &[f64]) -> Vec<f64> {
    a.iter().map(|r| r.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// `x^T a^-1 x` through the explicit inverse.
pub fn inv_quadratic(a: &Dense, x: &[f64]) -> f64 {
    dot(x, &mat_vec(&inverse(a), x))
}

/// The library regularizes covariances by `1e-8 * trace / d` before
/// factoring; oracles apply the same shift by hand.
pub fn with_ridge(a: &Dense) -> Dense {
    let d = a.len();
    let trace: f64 = (0..d).map(|i| a[i][i]).sum();
    let eps = if trace > 0.0 { 1e-8 * trace / d as f64 } else { 1e-12 };
    let mut out = a.clone();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] += eps;
    }
    out
}

/// Random symmetric positive definite matrix `A A^T + shift I`.
pub fn random_spd(rng: &mut ChaCha8Rng, d: usize, shift: f64) -> Dense {
    let a: Dense = (0..d).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| dot(&a[i], &a[j]) + if i == j { shift } else { 0.0 })
                .collect()
        })
        .collect()
}

pub fn random_vec(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(-scale..scale)).collect()
}

/// Random probability vector with `k` entries, some of them exactly zero.
pub fn random_probabilities(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k)
        .map(|_| if rng.random_bool(0.15) { 0.0 } else { rng.random_range(0.0..1.0) })
        .collect();
    let s: f64 = raw.iter().sum();
    if s == 0.0 {
        let mut p = vec![0.0; k];
        p[0] = 1.0;
        return p;
    }
    raw.iter().map(|v| v / s).collect()
}

/// Labelled Gaussian blobs around random centres; every class gets
/// `per_class` points.
pub fn blobs(rng: &mut ChaCha8Rng, classes: usize, per_class: usize, d: usize, spread: f64) -> (Dense, Vec<usize>) {
    use rand_distr::{Distribution, StandardNormal};
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in 0..classes {
        let centre = random_vec(rng, d, 2.0);
        let scales: Vec<f64> = (0..d).map(|_| spread * rng.random_range(0.5..1.5)).collect();
        for _ in 0..per_class {
            let z: Vec<f64> = (0..d).map(|v| {
                let e: f64 = StandardNormal.sample(rng);
                centre[v] + scales[v] * e
            }).collect();
            xs.push(z);
            ys.push(j);
        }
    }
    (xs, ys)
}

pub fn mean(xs: &[&Vec<f64>]) -> Vec<f64> {
    let d = xs[0].len();
    (0..d).map(|v| xs.iter().map(|x| x[v]).sum::<f64>() / xs.len() as f64).collect()
}

/// Unbiased sample covariance.
pub fn covariance(xs: &[&Vec<f64>]) -> Dense {
    let m = mean(xs);
    let d = m.len();
    let n = xs.len() as f64;
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| xs.iter().map(|x| (x[i] - m[i]) * (x[j] - m[j])).sum::<f64>() / (n - 1.0))
                .collect()
        })
        .collect()
}

/// Points of a `steps^d` lattice over `[lo, hi]^d`, nudged by an irrational
/// offset so no point lands on a symmetric decision boundary.
pub fn lattice(d: usize, steps: usize, lo: f64, hi: f64) -> Dense {
    let total = steps.pow(d as u32);
    let h = (hi - lo) / (steps - 1) as f64;
    (0..total)
        .map(|mut idx| {
            (0..d)
                .map(|v| {
                    let i = idx % steps;
                    idx /= steps;
                    lo + h * i as f64 + 1e-3 * std::f64::consts::SQRT_2 * (v + 1) as f64
                })
                .collect()
        })
        .collect()
}
