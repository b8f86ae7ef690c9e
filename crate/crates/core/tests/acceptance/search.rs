//! Neighbour search, split search and fold dealing against exhaustive or
//! counting oracles.

use cdsproxy::domain::{Dataset, TrainedClassifier};
use cdsproxy::evaluation::stratified_folds;
use cdsproxy::geometric::{fit_knn, Metric};
use cdsproxy::trees::{best_split, SplitCriterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{self, Dense};
use crate::Outcome;

/// Values on a half-integer grid, so exact distance ties are common.
fn coarse_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Dense {
    (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-6i32..=6) as f64 * 0.5).collect())
        .collect()
}

fn oracle_distance(metric: Metric, x: &[f64], y: &[f64], inv: &Dense) -> f64 {
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    match metric {
        Metric::Euclidean => diff.iter().map(|v| v * v).sum::<f64>().sqrt(),
        Metric::CityBlock => diff.iter().map(|v| v.abs()).sum(),
        Metric::Mahalanobis => oracle::dot(&diff, &oracle::mat_vec(inv, &diff)).sqrt(),
    }
}

/// Returns (queries, mismatches).
fn knn(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let (mut queries, mut bad) = (0, 0);
    for inst in 0..30 {
        let n = rng.random_range(5..=30);
        let d = rng.random_range(1..=3);
        let classes = 3;
        let mut xs = coarse_points(rng, n, d);
        // keep the Mahalanobis covariance well conditioned
        for (i, x) in xs.iter_mut().enumerate() {
            x[i % d] += 0.25 * (i % 3) as f64;
        }
        let ys: Vec<usize> = (0..n).map(|i| i % classes).collect();
        let ds = Dataset::from_labels(xs.clone(), ys.clone(), classes).unwrap();
        let metric = [Metric::Euclidean, Metric::CityBlock, Metric::Mahalanobis][inst % 3];
        let all: Vec<&Vec<f64>> = xs.iter().collect();
        let inv = oracle::inverse(&oracle::with_ridge(&oracle::covariance(&all)));
        let probes = coarse_points(rng, 6, d);
        for k in 1..=n {
            let model = fit_knn(&ds, k, metric).unwrap();
            for x in &probes {
                let mut order: Vec<(f64, usize)> =
                    xs.iter().enumerate().map(|(i, p)| (oracle_distance(metric, x, p, &inv), i)).collect();
                order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
                let expected: Vec<usize> = order.iter().take(k).map(|p| p.1).collect();
                let mut votes = vec![0.0; classes];
                for &i in &expected {
                    votes[ys[i]] += 1.0;
                }
                queries += 1;
                if model.neighbours(x).unwrap() != expected || model.scores(x).unwrap() != votes {
                    bad += 1;
                }
            }
        }
    }
    (queries, bad)
}

fn criterion_score(criterion: SplitCriterion, left: &[usize], right: &[usize]) -> f64 {
    let (nl, nr) = (left.iter().sum::<usize>() as f64, right.iter().sum::<usize>() as f64);
    let n = nl + nr;
    let g = |c: &[usize], t: f64| -> f64 {
        match criterion {
            SplitCriterion::Gini => 1.0 - c.iter().map(|&v| (v as f64 / t).powi(2)).sum::<f64>(),
            _ => c
                .iter()
                .filter(|&&v| v > 0)
                .map(|&v| -(v as f64 / t) * (v as f64 / t).ln())
                .sum(),
        }
    };
    if criterion == SplitCriterion::Twoing {
        let s: f64 = left.iter().zip(right).map(|(&l, &r)| (l as f64 / nl - r as f64 / nr).abs()).sum();
        return nl / n * nr / n * s * s;
    }
    let parent: Vec<usize> = left.iter().zip(right).map(|(a, b)| a + b).collect();
    g(&parent, n) - nl / n * g(left, nl) - nr / n * g(right, nr)
}

/// Returns (nodes, mismatches).
fn splits(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let (mut nodes, mut bad) = (0, 0);
    for inst in 0..300 {
        let n = rng.random_range(4..=25);
        let d = rng.random_range(1..=3);
        let classes = rng.random_range(2..=4);
        let xs = coarse_points(rng, n, d);
        let ys: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
        if ys.iter().all(|&y| y == ys[0]) {
            continue;
        }
        let criterion = [SplitCriterion::Gini, SplitCriterion::Entropy, SplitCriterion::Twoing][inst % 3];

        // every feature, every midpoint between consecutive distinct values
        let mut candidates: Vec<(usize, f64, f64)> = Vec::new();
        for f in 0..d {
            let mut values: Vec<f64> = xs.iter().map(|x| x[f]).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            for w in values.windows(2) {
                let t = w[0] + 0.5 * (w[1] - w[0]);
                let mut left = vec![0; classes];
                let mut right = vec![0; classes];
                for (x, &y) in xs.iter().zip(&ys) {
                    if x[f] <= t { left[y] += 1 } else { right[y] += 1 }
                }
                candidates.push((f, t, criterion_score(criterion, &left, &right)));
            }
        }
        nodes += 1;
        let Ok((rule, score)) = best_split(&xs, &ys, classes, criterion) else {
            bad += usize::from(!candidates.is_empty());
            continue;
        };
        let best = candidates.iter().map(|c| c.2).fold(f64::NEG_INFINITY, f64::max);
        let slack = 1e-12 * best.abs().max(1.0);
        let first = candidates.iter().find(|c| c.2 >= best - slack).unwrap();
        if (score - best).abs() > slack || rule.feature != first.0 || rule.threshold != first.1 {
            bad += 1;
        }
    }
    (nodes, bad)
}

/// Returns (plans, mismatches).
fn folds(rng: &mut ChaCha8Rng) -> (usize, usize) {
    let (mut plans, mut bad) = (0, 0);
    for _ in 0..200 {
        let classes = rng.random_range(2..=5);
        let sizes: Vec<usize> = (0..classes).map(|_| rng.random_range(1..=20)).collect();
        let mut ys: Vec<usize> = sizes.iter().enumerate().flat_map(|(c, &m)| std::iter::repeat_n(c, m)).collect();
        // interleave so class members are not contiguous
        for i in (1..ys.len()).rev() {
            ys.swap(i, rng.random_range(0..=i));
        }
        let n = ys.len();
        if n < 2 {
            continue;
        }
        let k = rng.random_range(2..=n.min(20));
        let ds = Dataset::from_labels(vec![vec![0.0]; n], ys.clone(), classes).unwrap();
        let plan = stratified_folds(&ds, k, rng.random()).unwrap();
        plans += 1;

        // classes are dealt in index order, continuing where the last one stopped
        let mut start = 0;
        let mut ok = plan.assignment.len() == n && plan.assignment.iter().all(|&f| f < k);
        for (c, &m) in sizes.iter().enumerate() {
            for f in 0..k {
                let expected = m / k + usize::from((f + k - start) % k < m % k);
                let got = (0..n).filter(|&i| ys[i] == c && plan.assignment[i] == f).count();
                ok &= got == expected;
            }
            start = (start + m) % k;
        }
        for f in 0..k {
            let mut both = plan.holdout(f);
            both.extend(plan.training(f));
            both.sort_unstable();
            ok &= both == (0..n).collect::<Vec<_>>() && plan.holdout(f).len() == plan.fold_sizes()[f];
        }
        let sizes = plan.fold_sizes();
        ok &= sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1;
        bad += usize::from(!ok);
    }
    (plans, bad)
}

pub fn criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (q, kb) = knn(&mut rng);
    let (s, sb) = splits(&mut rng);
    let (p, fb) = folds(&mut rng);
    Outcome::new(
        kb == 0 && sb == 0 && fb == 0,
        format!("kNN {q} queries / {kb} mismatches, splits {s} nodes / {sb}, folds {p} plans / {fb}"),
    )
}
