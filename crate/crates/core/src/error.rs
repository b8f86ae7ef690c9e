//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("at least two samples are required, got {0}")]
    FewerThanTwoSamples(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("matrix is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("component count {requested} outside 1..={available}")]
    BadComponentCount { requested: usize, available: usize },

    #[error("feature selection {0} needs the 5-year CDS rate, which is missing")]
    MissingFiveYearRate(String),
    #[error("missing column '{0}'")]
    MissingColumn(String),
    #[error("only {observed} observed 5-year rates, need at least {required}")]
    InsufficientObservedRates { observed: usize, required: usize },
    #[error("regression design is singular")]
    SingularDesign,
    #[error("class {class} has {count} samples, need at least {required}")]
    ClassTooSmall { class: usize, count: usize, required: usize },
    #[error("covariance matrix is singular")]
    SingularCovariance,
    #[error("kernel density estimate needs at least one sample")]
    EmptySample,
    #[error("bandwidth must be positive, got {0}")]
    NonpositiveBandwidth(f64),
    #[error("training data contains a single class")]
    SingleClassInput,
    #[error("not a probability vector")]
    NotAProbabilityVector,
    #[error("node is pure")]
    PureNode,
    #[error("no valid split: all feature vectors identical")]
    NoValidSplit,
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("invalid fold count K={k} for {n} samples")]
    BadK { k: usize, n: usize },
    #[error("class {0} has no samples")]
    EmptyClass(usize),
    #[error("fit failed on fold {fold}: {source}")]
    FitFailure {
        fold: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("missing result for classifier '{classifier}' on {feature_selection}")]
    MissingCell {
        classifier: String,
        feature_selection: String,
    },
    #[error("need at least {required} samples, got {actual}")]
    TooFewSamples { required: usize, actual: usize },
    #[error("empty bucket")]
    EmptyBucket,
    #[error("cross-sectional design is rank deficient")]
    RankDeficientDesign,
    #[error("unknown level '{level}' for category '{category}'")]
    UnknownCategoryLevel { category: String, level: String },
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("schema violation at row {row}, column '{column}': {message}")]
    SchemaViolation {
        row: usize,
        column: String,
        message: String,
    },
    #[error("value {value} out of range at row {row}, column '{column}'")]
    RangeViolation {
        row: usize,
        column: String,
        value: f64,
    },
    #[error("unknown classifier label '{0}'")]
    UnknownClassifier(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Stable machine-readable identifier, used by the CLI and the C bindings.
    pub fn code(&self) -> &'static str {
        match self {
            Error::FewerThanTwoSamples(_) => "FewerThanTwoSamples",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotSymmetric(_) => "NotSymmetric",
            Error::NoConvergence(_) => "NoConvergence",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::BadComponentCount { .. } => "BadComponentCount",
            Error::MissingFiveYearRate(_) => "MissingFiveYearRate",
            Error::MissingColumn(_) => "MissingColumn",
            Error::InsufficientObservedRates { .. } => "InsufficientObservedRates",
            Error::SingularDesign => "SingularDesign",
            Error::ClassTooSmall { .. } => "ClassTooSmall",
            Error::SingularCovariance => "SingularCovariance",
            Error::EmptySample => "EmptySample",
            Error::NonpositiveBandwidth(_) => "NonpositiveBandwidth",
            Error::SingleClassInput => "SingleClassInput",
            Error::NotAProbabilityVector => "NotAProbabilityVector",
            Error::PureNode => "PureNode",
            Error::NoValidSplit => "NoValidSplit",
            Error::EmptyTrainingSet => "EmptyTrainingSet",
            Error::BadK { .. } => "BadK",
            Error::EmptyClass(_) => "EmptyClass",
            Error::FitFailure { .. } => "FitFailure",
            Error::MissingCell { .. } => "MissingCell",
            Error::TooFewSamples { .. } => "TooFewSamples",
            Error::EmptyBucket => "EmptyBucket",
            Error::RankDeficientDesign => "RankDeficientDesign",
            Error::UnknownCategoryLevel { .. } => "UnknownCategoryLevel",
            Error::BadConfig(_) => "BadConfig",
            Error::SchemaViolation { .. } => "SchemaViolation",
            Error::RangeViolation { .. } => "RangeViolation",
            Error::UnknownClassifier(_) => "UnknownClassifier",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Io { .. } => "Io",
            Error::Csv(_) => "Csv",
        }
    }
}

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
