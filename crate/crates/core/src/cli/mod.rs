//! Command-line front end.
//!
//! Every command either reads a panel CSV (`--input`) or generates the
//! default synthetic panel from `--seed` and the generator flags, computes
//! its tables fully in memory and only then writes them. Each file starts
//! with `#` comment lines recording the tool version and every parameter
//! that influences the numbers, so a rerun with the same header reproduces
//! the file byte for byte.

mod baseline;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use crate::baselines::BucketStatistic;
use crate::datagen::{generate_panel, read_panel, write_panel_to, GeneratorConfig};
use crate::domain::{build_dataset, FeatureSelection, MarketPanel, PriorMode};
use crate::error::{Error, Result};
use crate::evaluation::report::{
    comment_header, cv_results_csv, family_tables, histogram_csv, pca_study_csv, ranking_csv,
};
use crate::evaluation::{correlation_histogram, cross_validate, pca_study, rank_classifiers, run_grid, DEFAULT_FOLDS};
use crate::geometric::Strategy;
use crate::parametric::Activation;
use crate::registry::{ClassifierSpec, Family, SvmKernelKind, CLASSIFIER_LABELS};

pub use baseline::{baseline_table, BaselineRow};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CDSPROXY_OUT_DIR";

/// Arguments that only say where files go or how many threads run; they are
/// left out of the comment header because they cannot change the numbers.
const UNRECORDED: [&str; 3] = ["out_dir", "jobs", "output"];

#[derive(Debug, Parser)]
#[command(name = "cdsproxy", version, about = "Classification-based CDS proxy construction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Master seed for panel generation, fold assignment and stochastic fits.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Directory receiving the output files.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,

    /// Worker threads for the grid; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic panel CSV.
    Generate {
        #[command(flatten)]
        generator: GeneratorArgs,
        /// Output file name inside the output directory.
        #[arg(long, default_value = "panel.csv")]
        output: String,
    },
    /// Cross-validate one classifier on one feature selection.
    Evaluate {
        #[command(flatten)]
        data: DataArgs,
        /// Classifier label, e.g. QDA-FullCov.
        #[arg(long)]
        classifier: String,
        #[arg(long, default_value = "FS1")]
        fs: FeatureSelection,
        #[arg(long, default_value_t = DEFAULT_FOLDS)]
        k_folds: usize,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "cv_results.csv")]
        output: String,
    },
    /// Cross-validate a classifier grid and write the ranking and per-family tables.
    Compare {
        #[command(flatten)]
        data: DataArgs,
        /// Classifier labels; repeat the flag for several. Defaults to all.
        #[arg(long)]
        classifier: Vec<String>,
        /// Feature selections; repeat the flag for several. Defaults to FS1 to FS6.
        #[arg(long)]
        fs: Vec<FeatureSelection>,
        #[arg(long, default_value_t = DEFAULT_FOLDS)]
        k_folds: usize,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Accuracy on the first m principal components for every m.
    PcaStudy {
        #[command(flatten)]
        data: DataArgs,
        /// Classifier labels; repeat the flag for several. Defaults to NB-norm-kernel.
        #[arg(long)]
        classifier: Vec<String>,
        #[arg(long, default_value = "FS1")]
        fs: FeatureSelection,
        #[arg(long, default_value_t = DEFAULT_FOLDS)]
        k_folds: usize,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "pca_study.csv")]
        output: String,
    },
    /// Histogram of pairwise feature correlations.
    Correlations {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value = "FS1")]
        fs: FeatureSelection,
        #[arg(long, default_value = "correlations.csv")]
        output: String,
    },
    /// Curve-mapping, cross-sectional and classifier proxies for every nonobservable.
    Baseline {
        #[command(flatten)]
        data: DataArgs,
        /// Bucket statistic for curve mapping: mean or median.
        #[arg(long, default_value = "mean")]
        statistic: BucketStatistic,
        #[arg(long, default_value = "BaggedTree")]
        classifier: String,
        /// Feature selection for the classifier proxy. Selections with the
        /// 5-year rate use imputed rates for the nonobservables.
        #[arg(long, default_value = "FS4")]
        fs: FeatureSelection,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "baseline.csv")]
        output: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GeneratorArgs {
    /// Observable counterparties in a generated panel.
    #[arg(long, default_value_t = GeneratorConfig::default().n_counterparties)]
    pub counterparties: usize,
    /// Nonobservable counterparties in a generated panel.
    #[arg(long, default_value_t = GeneratorConfig::default().n_nonobservables)]
    pub nonobservables: usize,
    #[arg(long, default_value_t = GeneratorConfig::default().n_days)]
    pub days: usize,
    /// Loading on the common factor, in [0, 1).
    #[arg(long, default_value_t = GeneratorConfig::default().factor_loading)]
    pub rho: f64,
    /// Scale of the idiosyncratic noise.
    #[arg(long, default_value_t = GeneratorConfig::default().idiosyncratic_scale)]
    pub sigma: f64,
    /// Spacing of the counterparty signatures.
    #[arg(long, default_value_t = GeneratorConfig::default().base_spacing)]
    pub spacing: f64,
}

impl GeneratorArgs {
    fn config(&self, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            n_counterparties: self.counterparties,
            n_nonobservables: self.nonobservables,
            n_days: self.days,
            factor_loading: self.rho,
            idiosyncratic_scale: self.sigma,
            base_spacing: self.spacing,
            seed,
            ..GeneratorConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Panel CSV to read. Without it the synthetic panel is generated.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub generator: GeneratorArgs,
}

impl DataArgs {
    fn panel(&self, seed: u64) -> Result<MarketPanel> {
        match &self.input {
            Some(path) => read_panel(path),
            None => generate_panel(&self.generator.config(seed)),
        }
    }
}

/// Hyperparameter overrides. Unset flags keep the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Naive Bayes kernel bandwidth b.
    #[arg(short = 'b', long)]
    pub bandwidth: Option<f64>,
    /// Neighbourhood size k for kNN.
    #[arg(long = "neighbours")]
    pub neighbours: Option<usize>,
    /// Split bound z for single trees.
    #[arg(short = 'z', long)]
    pub max_splits: Option<usize>,
    /// Learning cycles B for bagged trees.
    #[arg(short = 'B', long)]
    pub cycles: Option<usize>,
    /// Box constraint C for the SVM.
    #[arg(short = 'C', long)]
    pub cost: Option<f64>,
    /// SVM kernel (linear, gaussian, poly); only valid with SVM classifiers.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Multiclass strategy for the SVM: ovr or ovo.
    #[arg(long)]
    pub svm_strategy: Option<Strategy>,
    /// Hidden activation (tanh, linear, elliot); only valid with NN classifiers.
    #[arg(long)]
    pub activation: Option<Activation>,
    /// Hidden units h.
    #[arg(short = 'H', long)]
    pub hidden: Option<usize>,
    /// Class priors for discriminant analysis and naive Bayes: empirical or uniform.
    #[arg(long)]
    pub prior: Option<PriorMode>,
}

impl ModelArgs {
    fn apply(&self, label: &str) -> Result<ClassifierSpec> {
        let mut spec = ClassifierSpec::from_label(label)?;
        if let Some(kernel) = &self.kernel {
            let kind = match kernel.to_ascii_lowercase().as_str() {
                "linear" => SvmKernelKind::Linear,
                "gaussian" | "rbf" => SvmKernelKind::Gaussian,
                "poly" | "polynomial" => SvmKernelKind::Polynomial,
                other => return Err(Error::BadConfig(format!("unknown SVM kernel '{other}'"))),
            };
            match spec.family {
                Family::Svm(_) => spec.family = Family::Svm(kind),
                _ => return Err(Error::BadConfig(format!("--kernel applies to SVM classifiers, not {label}"))),
            }
        }
        if let Some(activation) = self.activation {
            match spec.family {
                Family::NeuralNet(_) => spec.family = Family::NeuralNet(activation),
                _ => return Err(Error::BadConfig(format!("--activation applies to NN classifiers, not {label}"))),
            }
        }
        let p = &mut spec.params;
        if let Some(b) = self.bandwidth {
            p.bandwidth = b;
        }
        if let Some(k) = self.neighbours {
            p.k = k;
        }
        if let Some(z) = self.max_splits {
            p.max_splits = z;
        }
        if let Some(b) = self.cycles {
            p.cycles = b;
        }
        if let Some(c) = self.cost {
            p.cost = c;
        }
        if let Some(s) = self.svm_strategy {
            p.svm_strategy = s;
        }
        if let Some(h) = self.hidden {
            p.hidden = h;
        }
        if let Some(prior) = self.prior {
            p.prior = prior;
        }
        spec.params.validate()?;
        Ok(spec)
    }

    fn specs(&self, labels: &[String], default: &[&str]) -> Result<Vec<ClassifierSpec>> {
        if labels.is_empty() {
            default.iter().map(|l| self.apply(l)).collect()
        } else {
            labels.iter().map(|l| self.apply(l)).collect()
        }
    }
}

fn check_folds(k: usize, n: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::BadK { k, n });
    }
    Ok(())
}

/// Files produced by one command, written only once everything is computed.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, String)>,
}

impl Outputs {
    fn add(&mut self, name: impl Into<String>, header: &str, body: String) {
        self.files.push((name.into(), format!("{header}{body}")));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    /// Writes every file into `dir`. If any write fails, the files written so
    /// far are removed again.
    pub fn commit(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut written = Vec::new();
        for (name, text) in &self.files {
            let path = dir.join(name);
            if let Err(e) = std::fs::write(&path, text) {
                let _ = std::fs::remove_file(&path);
                for p in &written {
                    let _ = std::fs::remove_file(p);
                }
                return Err(Error::io(path, e));
            }
            written.push(path);
        }
        Ok(written)
    }
}

/// `# key: value` entries for the command line in `matches`, covering the
/// global flags and the subcommand's flags, defaults included.
pub fn config_entries(matches: &ArgMatches) -> Vec<(String, String)> {
    let cmd = Cli::command();
    let mut out = vec![("cdsproxy".to_string(), env!("CARGO_PKG_VERSION").to_string())];
    push_entries(matches, &cmd, &mut out);
    if let Some((name, sub)) = matches.subcommand() {
        out.insert(1, ("command".to_string(), name.to_string()));
        let sub_cmd = cmd.find_subcommand(name).expect("matched subcommand exists");
        push_entries(sub, sub_cmd, &mut out);
    }
    out
}

fn push_entries(m: &ArgMatches, cmd: &clap::Command, out: &mut Vec<(String, String)>) {
    for id in m.ids() {
        let id = id.as_str();
        // flattened structs register an argument group named after the struct
        let is_group = cmd.get_groups().any(|g| g.get_id() == id);
        if UNRECORDED.contains(&id) || m.subcommand_name() == Some(id) || is_group {
            continue;
        }
        if let Ok(Some(raw)) = m.try_get_raw(id) {
            let values: Vec<String> = raw.map(|v| v.to_string_lossy().into_owned()).collect();
            let key = id.replace('_', "-");
            if !values.is_empty() && !out.iter().any(|(k, _)| *k == key) {
                out.push((key, values.join(",")));
            }
        }
    }
}

/// Computes the outputs of `command` without touching the file system
/// (except for reading `--input`).
pub fn execute(cli: &Cli, header: &str) -> Result<Outputs> {
    let seed = cli.seed;
    let mut out = Outputs::default();
    match &cli.command {
        Command::Generate { generator, output } => {
            let panel = generate_panel(&generator.config(seed))?;
            let mut buf = Vec::new();
            write_panel_to(&mut buf, &panel, header)?;
            let text = String::from_utf8(buf).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            out.add(output.clone(), "", text);
        }
        Command::Evaluate {
            data,
            classifier,
            fs,
            k_folds,
            model,
            output,
        } => {
            let spec = model.apply(classifier)?;
            let panel = data.panel(seed)?.observables();
            let ds = build_dataset(&panel, *fs)?;
            check_folds(*k_folds, ds.len())?;
            let r = cross_validate(&spec, &ds, *k_folds, seed)?;
            out.add(output.clone(), header, cv_results_csv(&[r])?);
        }
        Command::Compare {
            data,
            classifier,
            fs,
            k_folds,
            model,
        } => {
            let specs = model.specs(classifier, &CLASSIFIER_LABELS)?;
            let selections = if fs.is_empty() { FeatureSelection::ALL.to_vec() } else { fs.clone() };
            let panel = data.panel(seed)?.observables();
            check_folds(*k_folds, panel.len())?;
            let results = run_grid(&panel, &specs, &selections, *k_folds, seed)?;
            let table = rank_classifiers(&results)?;
            out.add("ranking.csv", header, ranking_csv(&table)?);
            out.add("cv_results.csv", header, cv_results_csv(&results)?);
            for (group, csv) in family_tables(&results)? {
                out.add(format!("family_{group}.csv"), header, csv);
            }
        }
        Command::PcaStudy {
            data,
            classifier,
            fs,
            k_folds,
            model,
            output,
        } => {
            let specs = model.specs(classifier, &["NB-norm-kernel"])?;
            let panel = data.panel(seed)?.observables();
            let ds = build_dataset(&panel, *fs)?;
            check_folds(*k_folds, ds.len())?;
            let studies = specs
                .iter()
                .map(|s| pca_study(s, &ds, *k_folds, seed))
                .collect::<Result<Vec<_>>>()?;
            out.add(output.clone(), header, pca_study_csv(&studies)?);
        }
        Command::Correlations { data, fs, output } => {
            let panel = data.panel(seed)?.observables();
            let ds = build_dataset(&panel, *fs)?;
            let h = correlation_histogram(ds.features())?;
            out.add(output.clone(), header, histogram_csv(&h)?);
        }
        Command::Baseline {
            data,
            statistic,
            classifier,
            fs,
            model,
            output,
        } => {
            let spec = model.apply(classifier)?;
            let panel = data.panel(seed)?;
            let rows = baseline_table(&panel, *statistic, &spec, *fs, seed)?;
            out.add(output.clone(), header, baseline::baseline_csv(&rows)?);
        }
    }
    Ok(out)
}

/// Parses `args`, runs the command and writes its files. Returns the process
/// exit status: 0 on success, 2 for usage errors, 1 for anything else. Errors
/// go to stderr as `error[<code>]: <message>`.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    let header = comment_header(&config_entries(&matches));
    let result = run_parsed(&cli, &header);
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e);
            1
        }
    }
}

fn run_parsed(cli: &Cli, header: &str) -> Result<Vec<PathBuf>> {
    let outputs = match cli.jobs {
        Some(0) => return Err(Error::BadConfig("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::BadConfig(format!("cannot build a pool of {n} threads: {e}")))?
            .install(|| execute(cli, header))?,
        None => execute(cli, header)?,
    };
    outputs.commit(&cli.out_dir)
}
