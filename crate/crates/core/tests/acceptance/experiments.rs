//! Statistical behaviour on the default synthetic panel over several seeds.

use std::collections::BTreeMap;
use std::time::Instant;

use cdsproxy::datagen::{generate_panel, GeneratorConfig};
use cdsproxy::domain::{build_dataset, FeatureSelection, MarketPanel, PriorMode};
use cdsproxy::evaluation::{
    correlation_histogram, cross_validate, cross_validate_with_plan, rank_classifiers, run_grid, stratified_folds,
    CvResult, PcaLearner,
};
use cdsproxy::registry::{ClassifierSpec, Family, CLASSIFIER_LABELS};

use crate::Outcome;

const SEEDS: u64 = 10;
const REQUIRED: usize = 8;

fn observables(seed: u64) -> MarketPanel {
    generate_panel(&GeneratorConfig { seed, ..GeneratorConfig::default() })
        .expect("default generator")
        .observables()
}

pub fn correlation_regime() -> Outcome {
    let fractions: Vec<f64> = (0..SEEDS)
        .map(|seed| {
            let ds = build_dataset(&observables(seed), FeatureSelection::Fs1).unwrap();
            correlation_histogram(ds.features()).unwrap().fraction_at_least(0.7)
        })
        .collect();
    let held = fractions.iter().filter(|&&f| f >= 0.8).count();
    Outcome::new(
        held == SEEDS as usize,
        format!(
            "share of FS1 correlations >= 0.7 per seed: {}",
            fractions.iter().map(|f| format!("{f:.3}")).collect::<Vec<_>>().join(" ")
        ),
    )
}

/// Per-seed verdicts of the five directional claims.
#[derive(Default)]
struct Verdicts {
    top_four: usize,
    nb_below_qda: usize,
    pca_not_worse: usize,
    bagging_not_worse: usize,
    small_sets_worse: usize,
}

fn family_group(label: &str) -> &'static str {
    label.parse::<Family>().expect("table label").group()
}

/// Families whose mean error on FS3 and on FS6 both exceed the mean error
/// on FS1 and on FS4.
fn families_preferring_rich_sets(results: &[CvResult]) -> (usize, usize) {
    let mut by_group: BTreeMap<&str, BTreeMap<String, Vec<f64>>> = BTreeMap::new();
    for r in results {
        by_group
            .entry(family_group(&r.classifier))
            .or_default()
            .entry(r.selection.clone().unwrap_or_default())
            .or_default()
            .push(r.mean);
    }
    let mean = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    let held = by_group
        .values()
        .filter(|fs| {
            let u = |s: &str| mean(&fs[s]);
            u("FS3").min(u("FS6")) > u("FS1").max(u("FS4"))
        })
        .count();
    (held, by_group.len())
}

pub fn directional() -> Outcome {
    let specs = ClassifierSpec::all();
    let nb_norm = ClassifierSpec::from_label("NB-norm-kernel").unwrap();
    let mut v = Verdicts::default();
    let mut first_run = None;
    let mut notes = Vec::new();
    for seed in 0..SEEDS {
        let panel = observables(seed);
        let started = Instant::now();
        let results = run_grid(&panel, &specs, &FeatureSelection::ALL, 10, seed).unwrap();
        first_run.get_or_insert(started.elapsed().as_secs_f64());
        let table = rank_classifiers(&results).unwrap();
        let rank = |l: &str| table.rank_of(l).expect("ranked");
        let acc = |l: &str| table.row(l).expect("ranked").mean;

        let top: Vec<usize> = ["NN-Tangent", "SVM-Poly", "BaggedTree"].iter().map(|l| rank(l)).collect();
        v.top_four += usize::from(top.iter().all(|&r| r <= 4));
        let qda = rank("QDA-FullCov");
        v.nb_below_qda += usize::from(
            CLASSIFIER_LABELS.iter().filter(|l| l.starts_with("NB-")).all(|l| rank(l) > qda),
        );
        v.bagging_not_worse += usize::from(
            ["DT-Gini", "DT-Entropy", "DT-Twoing"].iter().all(|l| acc("BaggedTree") >= acc(l)),
        );
        let (rich, groups) = families_preferring_rich_sets(&results);
        v.small_sets_worse += usize::from(2 * rich > groups);

        let ds = build_dataset(&panel, FeatureSelection::Fs1).unwrap();
        let plan = stratified_folds(&ds, 10, seed).unwrap();
        let full = PcaLearner { inner: &nb_norm, components: ds.dim() };
        let pca = cross_validate_with_plan(&full, &ds, &plan).unwrap().accuracy();
        let raw = cross_validate_with_plan(&nb_norm, &ds, &plan).unwrap().accuracy();
        v.pca_not_worse += usize::from(pca >= raw);

        notes.push(format!(
            "seed {seed}: ranks NN-Tangent/SVM-Poly/BaggedTree {}/{}/{}, QDA-FullCov {qda}, NB ranks {}, NB pca {pca:.3} raw {raw:.3}, rich-set families {rich}/{groups}",
            top[0],
            top[1],
            top[2],
            CLASSIFIER_LABELS.iter().filter(|l| l.starts_with("NB-")).map(|l| rank(l).to_string()).collect::<Vec<_>>().join("/")
        ));
    }
    for n in &notes {
        println!("    {n}");
    }
    let minutes = first_run.unwrap_or(0.0) / 60.0;
    let counts = [v.top_four, v.nb_below_qda, v.pca_not_worse, v.bagging_not_worse, v.small_sets_worse];
    Outcome::new(
        counts.iter().all(|&c| c >= REQUIRED) && minutes < 30.0,
        format!(
            "seeds holding (of {SEEDS}): (a) {} (b) {} (c) {} (d) {} (e) {}; full grid {minutes:.1} min on {} thread(s)",
            counts[0],
            counts[1],
            counts[2],
            counts[3],
            counts[4],
            rayon::current_num_threads()
        ),
    )
}

/// Largest max-min of the mean error over K, with the cell attaining it.
fn widest_range(panel: &MarketPanel, specs: &[ClassifierSpec]) -> (f64, String) {
    let mut worst = (0.0f64, String::new());
    for fs in FeatureSelection::ALL {
        let ds = build_dataset(panel, fs).unwrap();
        for spec in specs {
            let errors: Vec<f64> = [5, 10, 15, 20]
                .iter()
                .map(|&k| cross_validate(spec, &ds, k, 0).unwrap().mean)
                .collect();
            let lo = errors.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = errors.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi - lo > worst.0 {
                worst = (hi - lo, format!("{} on {}", spec.family.label(), fs.label()));
            }
        }
    }
    worst
}

pub fn k_stability() -> Outcome {
    let panel = observables(0);
    let group = |g: &str| -> Vec<ClassifierSpec> {
        CLASSIFIER_LABELS
            .iter()
            .filter(|l| family_group(l) == g)
            .map(|l| ClassifierSpec::from_label(l).unwrap())
            .collect()
    };
    let mut parts = Vec::new();
    let mut pass = true;
    for g in ["DA", "LR", "SVM"] {
        let (range, cell) = widest_range(&panel, &group(g));
        pass &= range <= 0.05;
        parts.push(format!("{g} {range:.4} ({cell})"));
    }
    // diagnostic only: the discriminants' sensitivity to the fold class shares
    let uniform: Vec<ClassifierSpec> = group("DA")
        .into_iter()
        .map(|mut s| {
            s.params.prior = PriorMode::Uniform;
            s
        })
        .collect();
    let (range, cell) = widest_range(&panel, &uniform);
    Outcome::new(
        pass,
        format!(
            "widest range of mean error over K in 5,10,15,20 across 6 selections: {}; DA with uniform priors {range:.4} ({cell})",
            parts.join(", ")
        ),
    )
}
