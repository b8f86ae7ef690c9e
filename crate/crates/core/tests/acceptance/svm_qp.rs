//! The SMO dual solution against an independent dense QP solver.

use cdsproxy::geometric::{svm::solve_dual, KernelSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{self, Dense};
use crate::Outcome;

const OBJECTIVE_TOL: f64 = 1e-4;
const KKT_TOL: f64 = 1e-6;

fn objective(q: &Dense, alpha: &[f64]) -> f64 {
    0.5 * oracle::dot(alpha, &oracle::mat_vec(q, alpha)) - alpha.iter().sum::<f64>()
}

/// Euclidean projection onto `{0 <= a <= c, y^T a = 0}`: the projection is
/// `clip(v + lambda y)` for the `lambda` zeroing `y^T a`, found by bisection.
fn project(v: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let at = |lambda: f64| -> Vec<f64> { v.iter().zip(y).map(|(a, b)| (a + lambda * b).clamp(0.0, c)).collect() };
    let balance = |a: &[f64]| oracle::dot(a, y);
    let reach = v.iter().fold(0.0f64, |m, x| m.max(x.abs())) + c + 1.0;
    let (mut lo, mut hi) = (-reach, reach);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if balance(&at(mid)) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(0.5 * (lo + hi))
}

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
fn spectral_bound(q: &Dense) -> f64 {
    let mut v = vec![1.0; q.len()];
    let mut lambda = 0.0;
    for _ in 0..500 {
        let w = oracle::mat_vec(q, &v);
        let n = oracle::dot(&w, &w).sqrt();
        if n == 0.0 {
            return 1.0;
        }
        lambda = n / oracle::dot(&v, &v).sqrt();
        v = w.iter().map(|x| x / n).collect();
    }
    1.05 * lambda
}

/// Accelerated projected gradient with function-value restarts.
fn reference_qp(q: &Dense, y: &[f64], c: f64) -> Vec<f64> {
    let n = y.len();
    let step = 1.0 / spectral_bound(q);
    let mut x = project(&vec![0.0; n], y, c);
    let mut z = x.clone();
    let mut t = 1.0f64;
    let mut f_prev = objective(q, &x);
    for _ in 0..60_000 {
        let g = oracle::mat_vec(q, &z);
        let trial: Vec<f64> = z.iter().zip(&g).map(|(zi, gi)| zi - step * (gi - 1.0)).collect();
        let next = project(&trial, y, c);
        let f = objective(q, &next);
        if f > f_prev {
            // restart momentum
            t = 1.0;
            z = x.clone();
            continue;
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        z = next.iter().zip(&x).map(|(a, b)| a + (t - 1.0) / t_next * (a - b)).collect();
        let moved = next.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        x = next;
        t = t_next;
        f_prev = f;
        if moved < 1e-13 {
            break;
        }
    }
    x
}

/// Maximal KKT violation `m(a) - M(a)` recomputed from scratch.
fn kkt_gap(q: &Dense, y: &[f64], alpha: &[f64], c: f64) -> f64 {
    let g: Vec<f64> = oracle::mat_vec(q, alpha).iter().map(|v| v - 1.0).collect();
    let mut up = f64::NEG_INFINITY;
    let mut low = f64::INFINITY;
    for i in 0..y.len() {
        let v = -y[i] * g[i];
        let in_up = (y[i] > 0.0 && alpha[i] < c) || (y[i] < 0.0 && alpha[i] > 0.0);
        let in_low = (y[i] < 0.0 && alpha[i] < c) || (y[i] > 0.0 && alpha[i] > 0.0);
        if in_up {
            up = up.max(v);
        }
        if in_low {
            low = low.min(v);
        }
    }
    (up - low).max(0.0)
}

pub fn criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let kernels = [KernelSpec::Linear, KernelSpec::Gaussian { c: 0.5 }, KernelSpec::Polynomial { degree: 3 }];
    let (mut worst_obj, mut worst_kkt, mut worst_balance, mut box_ok) = (0.0f64, 0.0f64, 0.0f64, true);
    let mut instances = 0;
    for kernel in kernels {
        for inst in 0..8 {
            let n = [12, 24, 40, 60][inst % 4];
            let cost = [0.5, 1.0, 10.0, 3.0][(inst / 2) % 4];
            let spread = rng.random_range(0.6..1.6);
            let (xs, labels) = oracle::blobs(&mut rng, 2, n / 2, 2, spread);
            let scale = xs.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            let xs: Dense = xs.iter().map(|x| x.iter().map(|v| v / scale).collect()).collect();
            let y: Vec<f64> = labels.iter().map(|&l| if l == 0 { 1.0 } else { -1.0 }).collect();

            let gram = kernel.gram(&xs);
            let q: Dense = (0..n)
                .map(|i| (0..n).map(|j| y[i] * y[j] * kernel.eval(&xs[i], &xs[j])).collect())
                .collect();
            let sol = solve_dual(&gram, &y, cost, KKT_TOL, 5_000_000).unwrap();
            let reference = reference_qp(&q, &y, cost);

            worst_obj = worst_obj.max((objective(&q, &sol.alpha) - objective(&q, &reference)).abs());
            worst_kkt = worst_kkt.max(kkt_gap(&q, &y, &sol.alpha, cost));
            worst_balance = worst_balance.max(oracle::dot(&sol.alpha, &y).abs());
            box_ok &= sol.alpha.iter().all(|&a| (0.0..=cost).contains(&a));
            instances += 1;
        }
    }
    Outcome::new(
        worst_obj <= OBJECTIVE_TOL && worst_kkt <= KKT_TOL && worst_balance <= KKT_TOL && box_ok,
        format!(
            "{instances} instances (n <= 60, three kernels); max |objective gap| {worst_obj:.1e}, max KKT gap {worst_kkt:.1e}, max |sum a y| {worst_balance:.1e}, box {}",
            if box_ok { "ok" } else { "violated" }
        ),
    )
}
