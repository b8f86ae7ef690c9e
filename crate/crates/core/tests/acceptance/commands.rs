//! Command-line determinism and the baseline proxies.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use cdsproxy::baselines::BucketStatistic;
use cdsproxy::cli::{self, baseline_table};
use cdsproxy::datagen::{generate_panel, GeneratorConfig};
use cdsproxy::domain::FeatureSelection;
use cdsproxy::registry::ClassifierSpec;

use crate::Outcome;

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let mut full = vec!["cdsproxy".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    full.push("--out-dir".into());
    full.push(dir.display().to_string());
    cli::run(full)
}

pub fn determinism() -> Outcome {
    let input_dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(input_dir.path(), &["generate", "--seed", "5"]), 0);
    let panel_csv = input_dir.path().join("panel.csv").display().to_string();

    let commands: Vec<Vec<&str>> = vec![
        vec!["generate", "--seed", "3", "--rho", "0.9"],
        vec!["evaluate", "--classifier", "NN-Tangent", "--fs", "FS4", "--seed", "2"],
        vec!["evaluate", "--classifier", "BaggedTree", "--input", &panel_csv],
        vec!["compare", "--classifier", "LDA-FullCov", "--classifier", "SVM-Poly", "--classifier", "BaggedTree",
             "--fs", "FS1", "--fs", "FS3", "--seed", "1"],
        vec!["pca-study", "--seed", "4"],
        vec!["correlations", "--fs", "FS2", "--seed", "6"],
        vec!["baseline", "--seed", "7"],
        vec!["baseline", "--statistic", "median", "--classifier", "kNN-Mahalanobis", "--fs", "FS1", "--input", &panel_csv],
    ];
    let mut differing = Vec::new();
    let mut files = 0;
    for args in &commands {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let mut with_jobs = args.clone();
        with_jobs.extend(["--jobs", "3"]);
        let codes = (run_in(a.path(), args), run_in(b.path(), &with_jobs));
        let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
        files += sa.len();
        if codes != (0, 0) || sa.is_empty() || sa != sb {
            differing.push(args[0].to_string());
        }
    }
    Outcome::new(
        differing.is_empty(),
        format!(
            "{} invocations run twice (default pool vs --jobs 3), {files} output files compared byte for byte{}",
            commands.len(),
            if differing.is_empty() { String::new() } else { format!("; differing: {}", differing.join(", ")) }
        ),
    )
}

pub fn baseline_homogeneity() -> Outcome {
    let panel = generate_panel(&GeneratorConfig::default()).unwrap();
    let spec = ClassifierSpec::from_label("BaggedTree").unwrap();
    let rows = baseline_table(&panel, BucketStatistic::Mean, &spec, FeatureSelection::Fs4, 0).unwrap();
    let mut cells: BTreeMap<[String; 4], Vec<_>> = BTreeMap::new();
    for r in &rows {
        cells.entry(r.categories.clone()).or_default().push(r);
    }
    let mut constant = true;
    let mut split_cells = 0;
    for members in cells.values() {
        let first = members[0];
        constant &= members
            .iter()
            .all(|r| r.curve_mapping == first.curve_mapping && r.cross_sectional == first.cross_sectional);
        let mut proxies: Vec<&str> = members.iter().map(|r| r.proxy.as_str()).collect();
        proxies.sort_unstable();
        proxies.dedup();
        split_cells += usize::from(proxies.len() >= 2);
    }
    Outcome::new(
        constant && split_cells >= 1,
        format!(
            "{} nonobservables in {} cells; baselines constant per cell: {constant}; cells with >= 2 ML proxies: {split_cells}",
            rows.len(),
            cells.len()
        ),
    )
}
