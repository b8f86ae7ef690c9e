//! Closed-form scores against brute-force evaluation.

use cdsproxy::bayes::{fit_lda, fit_nb, fit_qda, kde_log_density, Kernel, LOG_DENSITY_FLOOR};
use cdsproxy::domain::{Dataset, PriorMode, TrainedClassifier};
use cdsproxy::geometric::{distance, Metric};
use cdsproxy::numerics::{Cholesky, CovarianceMode, Matrix};
use cdsproxy::parametric::{sigmoid, softmax};
use cdsproxy::trees::{impurity, split_score, ImpurityMeasure, SplitCriterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{self, rel_err, Dense};
use crate::Outcome;

const TOL: f64 = 1e-8;

/// Instances checked and the worst relative error for one formula.
struct Tally {
    name: &'static str,
    instances: usize,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, instances: 0, worst: 0.0 }
    }

    fn check(&mut self, got: f64, want: f64) {
        self.instances += 1;
        let e = if got.is_finite() && want.is_finite() { rel_err(got, want) } else { f64::INFINITY };
        self.worst = self.worst.max(e);
    }
}

fn class_members<'a>(xs: &'a Dense, ys: &[usize], j: usize) -> Vec<&'a Vec<f64>> {
    xs.iter().zip(ys).filter(|(_, &y)| y == j).map(|(x, _)| x).collect()
}

fn diagonal_only(a: Dense) -> Dense {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| if i == j { a[i][j] } else { 0.0 }).collect()).collect()
}

fn random_dataset(rng: &mut ChaCha8Rng) -> (Dense, Vec<usize>, Dataset) {
    let classes = rng.random_range(2..=4);
    let d = rng.random_range(1..=4);
    let per = rng.random_range(6..=15);
    let (xs, ys) = oracle::blobs(rng, classes, per, d, 1.0);
    let ds = Dataset::from_labels(xs.clone(), ys.clone(), classes).unwrap();
    (xs, ys, ds)
}

fn discriminants(rng: &mut ChaCha8Rng, lda: &mut Tally, qda: &mut Tally) {
    for inst in 0..120 {
        let (xs, ys, ds) = random_dataset(rng);
        let mode = if inst % 2 == 0 { CovarianceMode::Full } else { CovarianceMode::Diagonal };
        let shape = |m: Dense| if mode == CovarianceMode::Diagonal { diagonal_only(m) } else { m };
        let k = ds.n_classes();
        let n = xs.len() as f64;
        let log_prior: Vec<f64> = (0..k).map(|j| (class_members(&xs, &ys, j).len() as f64 / n).ln()).collect();
        let means: Vec<Vec<f64>> = (0..k).map(|j| oracle::mean(&class_members(&xs, &ys, j))).collect();
        let x = oracle::random_vec(rng, ds.dim(), 3.0);

        let all: Vec<&Vec<f64>> = xs.iter().collect();
        let pooled_inv = oracle::inverse(&oracle::with_ridge(&shape(oracle::covariance(&all))));
        let model = fit_lda(&ds, mode, PriorMode::Empirical).unwrap();
        let got = model.scores(&x).unwrap();
        for j in 0..k {
            let w = oracle::mat_vec(&pooled_inv, &means[j]);
            let want = oracle::dot(&x, &w) - 0.5 * oracle::dot(&means[j], &w) + log_prior[j];
            lda.check(got[j], want);
        }

        let model = fit_qda(&ds, mode, PriorMode::Empirical).unwrap();
        let got = model.scores(&x).unwrap();
        for j in 0..k {
            let v = oracle::with_ridge(&shape(oracle::covariance(&class_members(&xs, &ys, j))));
            let c: Vec<f64> = x.iter().zip(&means[j]).map(|(a, b)| a - b).collect();
            let want = -0.5 * oracle::log_det(&v) - 0.5 * oracle::inv_quadratic(&v, &c) + log_prior[j];
            qda.check(got[j], want);
        }
    }
}

fn kernel_value(kernel: Kernel, u: f64) -> f64 {
    match kernel {
        Kernel::Normal => (-u * u / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt(),
        Kernel::Triangular => if u.abs() <= 1.0 { 1.0 - u.abs() } else { 0.0 },
        Kernel::Epanechnikov => if u.abs() <= 1.0 { 0.75 * (1.0 - u * u) } else { 0.0 },
    }
}

/// Direct Parzen estimate, with the library's documented floor for empty
/// kernel support.
fn parzen_log(samples: &[f64], kernel: Kernel, b: f64, x: f64) -> f64 {
    let s: f64 = samples.iter().map(|&xi| kernel_value(kernel, (x - xi) / b)).sum();
    (s / (samples.len() as f64 * b)).ln().max(LOG_DENSITY_FLOOR)
}

const KERNELS: [Kernel; 3] = [Kernel::Normal, Kernel::Triangular, Kernel::Epanechnikov];

fn naive_bayes(rng: &mut ChaCha8Rng, nb: &mut Tally) {
    for inst in 0..120 {
        let (xs, ys, ds) = random_dataset(rng);
        let kernel = KERNELS[inst % 3];
        let b = rng.random_range(0.3..1.5);
        let model = fit_nb(&ds, kernel, b, PriorMode::Empirical).unwrap();
        // start from a training point so the compact kernels see some mass
        let anchor = &xs[rng.random_range(0..xs.len())];
        let x: Vec<f64> = anchor.iter().map(|v| v + rng.random_range(-0.5..0.5)).collect();
        let got = model.scores(&x).unwrap();
        let n = xs.len() as f64;
        for j in 0..ds.n_classes() {
            let members = class_members(&xs, &ys, j);
            let mut want = (members.len() as f64 / n).ln();
            for v in 0..ds.dim() {
                let column: Vec<f64> = members.iter().map(|m| m[v]).collect();
                want += parzen_log(&column, kernel, b, x[v]);
            }
            nb.check(got[j], want);
        }
    }
}

fn kde(rng: &mut ChaCha8Rng, tally: &mut Tally) {
    for inst in 0..150 {
        let kernel = KERNELS[inst % 3];
        let n = rng.random_range(1..40);
        let samples = oracle::random_vec(rng, n, 5.0);
        let b = rng.random_range(0.05..3.0);
        let x = samples[rng.random_range(0..n)] + rng.random_range(-2.0..2.0) * b;
        let got = kde_log_density(&samples, kernel, b, x).unwrap();
        tally.check(got, parzen_log(&samples, kernel, b, x));
    }
}

fn impurities(rng: &mut ChaCha8Rng, gini: &mut Tally, entropy: &mut Tally) {
    for _ in 0..150 {
        let k = rng.random_range(1..=8);
        let p = oracle::random_probabilities(rng, k);
        let g = 1.0 - p.iter().map(|v| v * v).sum::<f64>();
        let h: f64 = p.iter().map(|&v| if v > 0.0 { -v * v.ln() } else { 0.0 }).sum();
        gini.check(impurity(ImpurityMeasure::Gini, &p).unwrap(), g);
        entropy.check(impurity(ImpurityMeasure::Entropy, &p).unwrap(), h);
    }
}

fn splits(rng: &mut ChaCha8Rng, gain: &mut Tally, twoing: &mut Tally) {
    let g_of = |measure: SplitCriterion, p: &[f64]| match measure {
        SplitCriterion::Gini => 1.0 - p.iter().map(|v| v * v).sum::<f64>(),
        _ => p.iter().map(|&v| if v > 0.0 { -v * v.ln() } else { 0.0 }).sum(),
    };
    for inst in 0..360 {
        let k = rng.random_range(2..=5);
        let left: Vec<usize> = (0..k).map(|_| rng.random_range(0..8)).collect();
        let right: Vec<usize> = (0..k).map(|_| rng.random_range(0..8)).collect();
        let (nl, nr) = (left.iter().sum::<usize>(), right.iter().sum::<usize>());
        if nl == 0 || nr == 0 {
            continue;
        }
        let parent: Vec<usize> = left.iter().zip(&right).map(|(a, b)| a + b).collect();
        let n = nl + nr;
        let probs = |c: &[usize], t: usize| c.iter().map(|&v| v as f64 / t as f64).collect::<Vec<f64>>();
        let (pp, pl, pr) = (probs(&parent, n), probs(&left, nl), probs(&right, nr));
        let (wl, wr) = (nl as f64 / n as f64, nr as f64 / n as f64);
        let criterion = [SplitCriterion::Gini, SplitCriterion::Entropy, SplitCriterion::Twoing][inst % 3];
        let got = split_score(criterion, &parent, &left, nl, n);
        if criterion == SplitCriterion::Twoing {
            let s: f64 = pl.iter().zip(&pr).map(|(a, b)| (b - a).abs()).sum();
            twoing.check(got, wl * wr * s * s);
        } else {
            let want = g_of(criterion, &pp) - (wl * g_of(criterion, &pl) + wr * g_of(criterion, &pr));
            gain.check(got, want);
        }
    }
}

fn activations(rng: &mut ChaCha8Rng, soft: &mut Tally, sig: &mut Tally) {
    for _ in 0..150 {
        let len = rng.random_range(1..=6);
        let z = oracle::random_vec(rng, len, 30.0);
        let denom: f64 = z.iter().map(|v| v.exp()).sum();
        for (g, v) in softmax(&z).iter().zip(&z) {
            soft.check(*g, v.exp() / denom);
        }
        let t = rng.random_range(-30.0..30.0);
        sig.check(sigmoid(t), 1.0 / (1.0 + (-t).exp()));
    }
}

fn distances(rng: &mut ChaCha8Rng, tally: &mut Tally) {
    for inst in 0..150 {
        let d = rng.random_range(1..=5);
        let x = oracle::random_vec(rng, d, 4.0);
        let y = oracle::random_vec(rng, d, 4.0);
        let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        match inst % 3 {
            0 => tally.check(
                distance(Metric::Euclidean, &x, &y, None).unwrap(),
                diff.iter().map(|v| v * v).sum::<f64>().sqrt(),
            ),
            1 => tally.check(
                distance(Metric::CityBlock, &x, &y, None).unwrap(),
                diff.iter().map(|v| v.abs()).sum(),
            ),
            _ => {
                let v = oracle::random_spd(rng, d, 0.3);
                let chol = Cholesky::factor(&Matrix::from_rows(&v).unwrap()).unwrap();
                tally.check(
                    distance(Metric::Mahalanobis, &x, &y, Some(&chol)).unwrap(),
                    oracle::inv_quadratic(&v, &diff).sqrt(),
                );
            }
        }
    }
}

pub fn criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut tallies: Vec<Tally> = [
        "lda", "qda", "nb", "kde", "gini", "entropy", "gain", "twoing", "softmax", "sigmoid", "distance",
    ]
    .into_iter()
    .map(Tally::new)
    .collect();
    let [lda, qda, nb, kd, gini, entropy, gain, twoing, soft, sig, dist] = &mut tallies[..] else {
        unreachable!()
    };
    discriminants(&mut rng, lda, qda);
    naive_bayes(&mut rng, nb);
    kde(&mut rng, kd);
    impurities(&mut rng, gini, entropy);
    splits(&mut rng, gain, twoing);
    activations(&mut rng, soft, sig);
    distances(&mut rng, dist);

    let pass = tallies.iter().all(|t| t.instances >= 100 && t.worst <= TOL);
    let detail = tallies
        .iter()
        .map(|t| format!("{} n={} max_rel={:.1e}", t.name, t.instances, t.worst))
        .collect::<Vec<_>>()
        .join(", ");
    Outcome::new(pass, detail)
}
