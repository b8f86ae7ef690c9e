//! Models that must coincide with a simpler model under special settings.

use cdsproxy::bayes::{fit_gaussian_nb, fit_lda, fit_qda, QdaModel};
use cdsproxy::domain::{ClassPriors, Dataset, PriorMode, TrainedClassifier};
use cdsproxy::geometric::{fit_svm_binary, fit_svm_multiclass, KernelSpec, Strategy, SvmConfig};
use cdsproxy::numerics::{sample_mean_covariance, CovarianceMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracle::{self, Dense};
use crate::Outcome;

/// Lattice covering the data with a margin.
fn covering_grid(xs: &Dense, steps: usize) -> Dense {
    let lo = xs.iter().flatten().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let hi = xs.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max) + 1.0;
    oracle::lattice(xs[0].len(), steps, lo, hi)
}

fn disagreements(a: &dyn TrainedClassifier, b: &dyn TrainedClassifier, grid: &Dense) -> usize {
    grid.iter()
        .filter(|x| a.classify(x).unwrap() != b.classify(x).unwrap())
        .count()
}

pub fn criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut points, mut lda_qda, mut nb_qda, mut svm_pair) = (0usize, 0usize, 0usize, 0usize);

    for inst in 0..40 {
        let classes = rng.random_range(2..=4);
        let d = 2 + inst % 2;
        let per_class = rng.random_range(8..=25);
        let (xs, ys) = oracle::blobs(&mut rng, classes, per_class, d, 1.2);
        let ds = Dataset::from_labels(xs.clone(), ys.clone(), classes).unwrap();
        let grid = covering_grid(&xs, if d == 2 { 60 } else { 16 });
        points += grid.len();

        for mode in [CovarianceMode::Full, CovarianceMode::Diagonal] {
            let lda = fit_lda(&ds, mode, PriorMode::Empirical).unwrap();
            let shared = sample_mean_covariance(ds.features(), mode).unwrap().matrix;
            let qda = QdaModel::from_parts(
                lda.means.clone(),
                &vec![shared; classes],
                mode,
                ClassPriors::empirical(&ys, classes).unwrap(),
            )
            .unwrap();
            lda_qda += disagreements(&lda, &qda, &grid);
        }

        let nb = fit_gaussian_nb(&ds, PriorMode::Empirical).unwrap();
        let qda_diag = fit_qda(&ds, CovarianceMode::Diagonal, PriorMode::Empirical).unwrap();
        nb_qda += disagreements(&nb, &qda_diag, &grid);
    }

    let kernels = [KernelSpec::Linear, KernelSpec::Gaussian { c: 0.5 }, KernelSpec::Polynomial { degree: 3 }];
    for inst in 0..15 {
        let (xs, ys) = oracle::blobs(&mut rng, 2, 30, 2, 1.5);
        let ds = Dataset::from_labels(xs.clone(), ys.clone(), 2).unwrap();
        let grid = covering_grid(&xs, 40);
        let pm: Vec<f64> = ys.iter().map(|&y| if y == 0 { 1.0 } else { -1.0 }).collect();
        let base = SvmConfig::new(kernels[inst % 3]);
        let binary = fit_svm_binary(&xs, &pm, &base).unwrap();
        for strategy in [Strategy::OneVsRest, Strategy::OneVsOne] {
            let model = fit_svm_multiclass(&ds, &SvmConfig { strategy, ..base }).unwrap();
            points += grid.len();
            svm_pair += grid
                .iter()
                .filter(|x| {
                    let expected = if binary.decision(x).unwrap() >= 0.0 { 0 } else { 1 };
                    model.classify(x).unwrap() != expected
                })
                .count();
        }
    }

    Outcome::new(
        lda_qda == 0 && nb_qda == 0 && svm_pair == 0,
        format!(
            "{points} grid points; disagreements LDA/equal-cov QDA {lda_qda}, Gaussian NB/diagonal QDA {nb_qda}, two-class SVM/binary {svm_pair}"
        ),
    )
}
