//! C ABI for the cdsproxy toolkit.
//!
//! Objects cross the boundary as opaque handles (`CdspPanel`, `CdspModel`)
//! that the caller releases with the matching `*_free` function. Every
//! fallible function returns a [`CdspStatus`]; on failure a description is
//! stored per thread and can be read with [`cdsp_last_error_message`].
//! Panics never unwind into C: they are caught and reported as
//! `CDSP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use cdsproxy::baselines::{curve_mapping_proxy, BucketStatistic};
use cdsproxy::datagen::{generate_panel, read_panel, write_panel, GeneratorConfig};
use cdsproxy::domain::{build_dataset, FeatureSelection, MarketPanel, TrainedClassifier};
use cdsproxy::evaluation::cross_validate;
use cdsproxy::registry::{ClassifierSpec, FittedClassifier};
use cdsproxy::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdspStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument or configuration value was rejected.
    InvalidArgument = 3,
    /// Reading or writing a file failed.
    Io = 4,
    /// Input data violated the panel schema or range rules.
    InvalidData = 5,
    /// A fit failed for numerical reasons (singular matrices, no convergence).
    Numerical = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

/// Opaque market panel.
pub struct CdspPanel {
    inner: MarketPanel,
}

/// Opaque fitted classifier together with its class names.
pub struct CdspModel {
    inner: FittedClassifier,
    class_names: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CdspStatus {
    match e {
        Error::Io { .. } => CdspStatus::Io,
        Error::SchemaViolation { .. }
        | Error::RangeViolation { .. }
        | Error::MissingColumn(_)
        | Error::Csv(_)
        | Error::MissingFiveYearRate(_) => CdspStatus::InvalidData,
        Error::NotPositiveDefinite { .. }
        | Error::NotSymmetric(_)
        | Error::NoConvergence(_)
        | Error::SingularCovariance
        | Error::SingularDesign
        | Error::RankDeficientDesign
        | Error::FitFailure { .. } => CdspStatus::Numerical,
        _ => CdspStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), (CdspStatus, String)>) -> CdspStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CdspStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(format!("panic: {msg}"));
            CdspStatus::Panic
        }
    }
}

fn core(e: Error) -> (CdspStatus, String) {
    (status_of(&e), format!("{}: {}", e.code(), e))
}

fn null(name: &str) -> (CdspStatus, String) {
    (CdspStatus::NullPointer, format!("{name} is null"))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, (CdspStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (CdspStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

fn selection(number: u8) -> Result<FeatureSelection, (CdspStatus, String)> {
    FeatureSelection::from_number(number)
        .ok_or_else(|| (CdspStatus::InvalidArgument, format!("feature selection must be 1..=6, got {number}")))
}

/// Message of the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cdsp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cdsp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Generates a synthetic panel. On success `*out` receives a new handle.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn cdsp_panel_generate(
    n_counterparties: usize,
    n_nonobservables: usize,
    n_days: usize,
    factor_loading: f64,
    idiosyncratic_scale: f64,
    base_spacing: f64,
    seed: u64,
    out: *mut *mut CdspPanel,
) -> CdspStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg = GeneratorConfig {
            n_counterparties,
            n_nonobservables,
            n_days,
            factor_loading,
            idiosyncratic_scale,
            base_spacing,
            seed,
            ..GeneratorConfig::default()
        };
        let panel = generate_panel(&cfg).map_err(core)?;
        *out = Box::into_raw(Box::new(CdspPanel { inner: panel }));
        Ok(())
    })
}

/// Reads a panel CSV.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cdsp_panel_read_csv(path: *const c_char, out: *mut *mut CdspPanel) -> CdspStatus {
    guard(|| {
        let path = text(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let panel = read_panel(PathBuf::from(path)).map_err(core)?;
        *out = Box::into_raw(Box::new(CdspPanel { inner: panel }));
        Ok(())
    })
}

/// Writes a panel CSV.
///
/// # Safety
/// `panel` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cdsp_panel_write_csv(panel: *const CdspPanel, path: *const c_char) -> CdspStatus {
    guard(|| {
        let panel = panel.as_ref().ok_or_else(|| null("panel"))?;
        let path = text(path, "path")?;
        write_panel(&panel.inner, PathBuf::from(path)).map_err(core)
    })
}

/// Number of (counterparty, date) rows, or 0 for a null handle.
///
/// # Safety
/// `panel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdsp_panel_n_rows(panel: *const CdspPanel) -> usize {
    panel.as_ref().map_or(0, |p| p.inner.len())
}

/// Number of counterparties, or 0 for a null handle.
///
/// # Safety
/// `panel` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdsp_panel_n_counterparties(panel: *const CdspPanel) -> usize {
    panel.as_ref().map_or(0, |p| p.inner.counterparties().len())
}

/// Releases a panel. Null is ignored.
///
/// # Safety
/// `panel` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cdsp_panel_free(panel: *mut CdspPanel) {
    if !panel.is_null() {
        drop(Box::from_raw(panel));
    }
}

/// Fits `classifier` (a table label such as `"QDA-FullCov"`) on the
/// observable counterparties of `panel`, using feature selection
/// `fs` (1 to 6).
///
/// # Safety
/// `panel` must be a live handle, `classifier` a NUL-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cdsp_model_fit(
    panel: *const CdspPanel,
    classifier: *const c_char,
    fs: u8,
    seed: u64,
    out: *mut *mut CdspModel,
) -> CdspStatus {
    guard(|| {
        let panel = panel.as_ref().ok_or_else(|| null("panel"))?;
        let label = text(classifier, "classifier")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = ClassifierSpec::from_label(label).map_err(core)?;
        let ds = build_dataset(&panel.inner.observables(), selection(fs)?).map_err(core)?;
        let fitted = spec.fit_standardized(&ds, seed).map_err(core)?;
        let class_names = ds
            .class_names()
            .iter()
            .map(|n| CString::new(n.as_str()).map_err(|_| (CdspStatus::InvalidData, "class name with NUL".to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        *out = Box::into_raw(Box::new(CdspModel {
            inner: fitted,
            class_names,
        }));
        Ok(())
    })
}

/// Input dimension of a model, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdsp_model_dim(model: *const CdspModel) -> usize {
    model.as_ref().map_or(0, |m| m.inner.dim())
}

/// Number of classes of a model, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdsp_model_n_classes(model: *const CdspModel) -> usize {
    model.as_ref().map_or(0, |m| m.class_names.len())
}

/// Counterparty name of class `class`, or null when out of range. The
/// string lives as long as the model.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cdsp_model_class_name(model: *const CdspModel, class: usize) -> *const c_char {
    model
        .as_ref()
        .and_then(|m| m.class_names.get(class))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// Classifies one feature vector of length `len` (in raw units, ordered as
/// the feature selection's columns) and stores the class index in `*out_class`.
///
/// # Safety
/// `model` must be a live handle, `x` must point to `len` doubles and
/// `out_class` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cdsp_model_classify(
    model: *const CdspModel,
    x: *const f64,
    len: usize,
    out_class: *mut usize,
) -> CdspStatus {
    guard(|| {
        let model = model.as_ref().ok_or_else(|| null("model"))?;
        if x.is_null() {
            return Err(null("x"));
        }
        if out_class.is_null() {
            return Err(null("out_class"));
        }
        let x = std::slice::from_raw_parts(x, len);
        *out_class = model.inner.classify(x).map_err(core)?;
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cdsp_model_free(model: *mut CdspModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Stratified `k`-fold cross validation of `classifier` on the observables
/// of `panel`. Writes the mean and population sd of the fold
/// misclassification rates.
///
/// # Safety
/// `panel` must be a live handle, `classifier` a NUL-terminated string and
/// the output pointers valid.
#[no_mangle]
pub unsafe extern "C" fn cdsp_cross_validate(
    panel: *const CdspPanel,
    classifier: *const c_char,
    fs: u8,
    k: usize,
    seed: u64,
    out_mean: *mut f64,
    out_sd: *mut f64,
) -> CdspStatus {
    guard(|| {
        let panel = panel.as_ref().ok_or_else(|| null("panel"))?;
        let label = text(classifier, "classifier")?;
        if out_mean.is_null() || out_sd.is_null() {
            return Err(null("output"));
        }
        let spec = ClassifierSpec::from_label(label).map_err(core)?;
        let ds = build_dataset(&panel.inner.observables(), selection(fs)?).map_err(core)?;
        let r = cross_validate(&spec, &ds, k, seed).map_err(core)?;
        *out_mean = r.mean;
        *out_sd = r.sd;
        Ok(())
    })
}

/// Curve-mapping proxy of a bucket of `len` spreads. `median` selects the
/// median instead of the mean.
///
/// # Safety
/// `bucket` must point to `len` doubles (or be null when `len` is 0) and
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cdsp_curve_mapping(bucket: *const f64, len: usize, median: bool, out: *mut f64) -> CdspStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let values = if len == 0 {
            &[][..]
        } else if bucket.is_null() {
            return Err(null("bucket"));
        } else {
            std::slice::from_raw_parts(bucket, len)
        };
        let stat = if median { BucketStatistic::Median } else { BucketStatistic::Mean };
        *out = curve_mapping_proxy(values, stat).map_err(core)?;
        Ok(())
    })
}
