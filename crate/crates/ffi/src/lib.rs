//! C ABI for ordistack.
//!
//! Every function returns an [`OrdistackStatus`]. On failure a description
//! is available from [`ordistack_last_error_message`] on the calling thread.
//! Models are opaque handles created by `ordistack_model_load*` or
//! [`ordistack_fit`] and released with [`ordistack_model_free`].
//!
//! Matrices are dense row-major `double` buffers.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use ndarray::{Array2, ArrayView2};
use ordistack::learners::LearnerKind;
use ordistack::metrics::{polychoric, ContingencyTable};
use ordistack::ordinal::{
    difference_from_thresholds, eq1_class_probs, fit_one_vs_rest, fit_ordinal, monotone_adjust, FittingMode,
    InferenceMethod, SplitStrategy,
};
use ordistack::persist::{LabelInfo, ModelDocument, PersistedModel};
use ordistack::{ClassId, Dataset, Error, ThresholdProbs};

/// Result of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrdistackStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DataError = 3,
    NumericError = 4,
    IoError = 5,
    Panic = 6,
}

/// Values for the `method` argument of [`ordistack_fit`].
#[repr(u32)]
#[derive(Clone, Copy, Debug)]
pub enum OrdistackMethod {
    Difference = 0,
    Tree = 1,
    Votes = 2,
    OneVsRest = 3,
}

/// Values for the `learner` argument of [`ordistack_fit`].
#[repr(u32)]
#[derive(Clone, Copy, Debug)]
pub enum OrdistackLearner {
    Logistic = 0,
    GaussianNb = 1,
}

/// Values for the `strategy` argument of [`ordistack_fit`].
#[repr(u32)]
#[derive(Clone, Copy, Debug)]
pub enum OrdistackStrategy {
    EvenSplit = 0,
    BestClassifier = 1,
    First = 2,
    Last = 3,
    Middle = 4,
}

/// Values for the `mode` argument of [`ordistack_fit`].
#[repr(u32)]
#[derive(Clone, Copy, Debug)]
pub enum OrdistackMode {
    Full = 0,
    ConditionalSubset = 1,
}

/// Opaque model handle.
pub struct OrdistackModel {
    doc: ModelDocument,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(OrdistackStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Io(_) => OrdistackStatus::IoError,
            _ => match e.exit_code() {
                2 => OrdistackStatus::InvalidArgument,
                4 => OrdistackStatus::NumericError,
                _ => OrdistackStatus::DataError,
            },
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(OrdistackStatus::NullPointer, format!("`{what}` is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(OrdistackStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OrdistackStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrdistackStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            OrdistackStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| invalid(format!("`{what}` is not valid UTF-8")))
}

unsafe fn model_ref<'a>(m: *const OrdistackModel) -> Result<&'a OrdistackModel, Failure> {
    m.as_ref().ok_or_else(|| null("model"))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_out<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn matrix<'a>(x: *const f64, rows: usize, cols: usize) -> Result<ArrayView2<'a, f64>, Failure> {
    let len = rows.checked_mul(cols).ok_or_else(|| invalid("matrix size overflows"))?;
    let data = slice_arg(x, len, "x")?;
    ArrayView2::from_shape((rows, cols), data).map_err(|e| invalid(e.to_string()))
}

unsafe fn write_handle(out: *mut *mut OrdistackModel, doc: ModelDocument) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(OrdistackModel { doc }));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| invalid("string contains a nul byte"))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ordistack_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Loads a model document from a file.
///
/// # Safety
/// `path` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordistack_model_load(path: *const c_char, out: *mut *mut OrdistackModel) -> OrdistackStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let doc = ModelDocument::load(Path::new(path))?;
        write_handle(out, doc)
    })
}

/// Parses a model document from JSON text.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordistack_model_load_json(
    json: *const c_char,
    out: *mut *mut OrdistackModel,
) -> OrdistackStatus {
    guard(|| {
        let doc = ModelDocument::from_json(str_arg(json, "json")?)?;
        write_handle(out, doc)
    })
}

/// # Safety
/// `model` must be a live handle and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ordistack_model_save(model: *const OrdistackModel, path: *const c_char) -> OrdistackStatus {
    guard(|| {
        let m = model_ref(model)?;
        m.doc.save(Path::new(str_arg(path, "path")?))?;
        Ok(())
    })
}

/// Serialises a model; free the result with [`ordistack_string_free`].
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordistack_model_to_json(model: *const OrdistackModel, out: *mut *mut c_char) -> OrdistackStatus {
    guard(|| {
        let m = model_ref(model)?;
        write_string(out, m.doc.to_json()?)
    })
}

/// # Safety
/// `model` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ordistack_model_free(model: *mut OrdistackModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ordistack_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordistack_model_n_classes(model: *const OrdistackModel, out: *mut usize) -> OrdistackStatus {
    guard(|| {
        let n = model_ref(model)?.doc.model.n_classes();
        *out.as_mut().ok_or_else(|| null("out"))? = n;
        Ok(())
    })
}

/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordistack_model_n_features(model: *const OrdistackModel, out: *mut usize) -> OrdistackStatus {
    guard(|| {
        let n = model_ref(model)?.doc.model.n_features();
        *out.as_mut().ok_or_else(|| null("out"))? = n;
        Ok(())
    })
}

/// Label of class `index` (lowest class is 0); free with [`ordistack_string_free`].
///
/// # Safety
/// `model` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordistack_model_class_label(
    model: *const OrdistackModel,
    index: usize,
    out: *mut *mut c_char,
) -> OrdistackStatus {
    guard(|| {
        let m = model_ref(model)?;
        let label = m
            .doc
            .model
            .classes()
            .class_at(index)
            .ok_or_else(|| invalid(format!("class index {index} out of range")))?;
        write_string(out, label.to_string())
    })
}

/// Class probabilities, `rows × n_classes` row-major, into `out`.
///
/// # Safety
/// `x` must hold `rows * cols` doubles; `out` must hold `rows * n_classes`.
#[no_mangle]
pub unsafe extern "C" fn ordistack_model_predict_proba(
    model: *const OrdistackModel,
    x: *const f64,
    rows: usize,
    cols: usize,
    out: *mut f64,
) -> OrdistackStatus {
    guard(|| {
        let m = model_ref(model)?;
        let x = matrix(x, rows, cols)?;
        let probs = m.doc.model.predict_proba(x)?;
        let out = slice_out(out, probs.len(), "out")?;
        for (o, p) in out.iter_mut().zip(probs.iter()) {
            *o = *p;
        }
        Ok(())
    })
}

/// Predicted class indices into `out` (`rows` entries).
///
/// # Safety
/// `x` must hold `rows * cols` doubles; `out` must hold `rows` entries.
#[no_mangle]
pub unsafe extern "C" fn ordistack_model_predict(
    model: *const OrdistackModel,
    x: *const f64,
    rows: usize,
    cols: usize,
    out: *mut usize,
) -> OrdistackStatus {
    guard(|| {
        let m = model_ref(model)?;
        let x = matrix(x, rows, cols)?;
        let pred = m.doc.model.predict(x)?;
        slice_out(out, rows, "out")?.copy_from_slice(&pred);
        Ok(())
    })
}

/// Fits a model on a feature matrix and integer labels. Classes are the
/// distinct labels in ascending order. `seed` drives the best-classifier
/// folds.
///
/// # Safety
/// `x` must hold `rows * cols` doubles, `labels` `rows` entries; `out` must be
/// writable.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn ordistack_fit(
    x: *const f64,
    rows: usize,
    cols: usize,
    labels: *const i64,
    method: u32,
    learner: u32,
    strategy: u32,
    mode: u32,
    seed: u64,
    out: *mut *mut OrdistackModel,
) -> OrdistackStatus {
    guard(|| {
        let x: Array2<f64> = matrix(x, rows, cols)?.to_owned();
        let labels: Vec<ClassId> = slice_arg(labels, rows, "labels")?.iter().map(|&l| ClassId::from(l)).collect();
        let ds = Dataset::new(x, labels, None, None)?;
        let learner = match learner {
            0 => LearnerKind::Logistic,
            1 => LearnerKind::Gnb,
            other => return Err(invalid(format!("unknown learner {other}"))),
        };
        let strategy = match strategy {
            0 => SplitStrategy::EvenSplit,
            1 => SplitStrategy::best_classifier(seed),
            2 => SplitStrategy::First,
            3 => SplitStrategy::Last,
            4 => SplitStrategy::Middle,
            other => return Err(invalid(format!("unknown strategy {other}"))),
        };
        let mode = match mode {
            0 => FittingMode::Full,
            1 => FittingMode::ConditionalSubset,
            other => return Err(invalid(format!("unknown mode {other}"))),
        };
        let inference = match method {
            0 => Some(InferenceMethod::Difference),
            1 => Some(InferenceMethod::Tree),
            2 => Some(InferenceMethod::Votes),
            3 => None,
            other => return Err(invalid(format!("unknown method {other}"))),
        };
        let model = match inference {
            Some(inference) => PersistedModel::Ordinal {
                inference,
                model: fit_ordinal(&learner, &ds, strategy, mode)?,
            },
            None => PersistedModel::OneVsRest {
                model: fit_one_vs_rest(&learner, &ds)?,
            },
        };
        write_handle(out, ModelDocument::new(model, LabelInfo::default()))
    })
}

unsafe fn threshold_arg(p: *const f64, n: usize) -> Result<ThresholdProbs, Failure> {
    Ok(ThresholdProbs::new(slice_arg(p, n, "p")?.to_vec())?)
}

/// Monotone adjustment of `n` threshold probabilities around `split`.
///
/// # Safety
/// `p` and `out` must each hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn ordistack_monotone_adjust(p: *const f64, n: usize, split: usize, out: *mut f64) -> OrdistackStatus {
    guard(|| {
        let adjusted = monotone_adjust(&threshold_arg(p, n)?, split)?;
        slice_out(out, n, "out")?.copy_from_slice(adjusted.as_slice());
        Ok(())
    })
}

/// Class probabilities (`n + 1` entries) by differencing adjusted threshold
/// probabilities.
///
/// # Safety
/// `p` must hold `n` doubles and `out` `n + 1`.
#[no_mangle]
pub unsafe extern "C" fn ordistack_difference_class_probs(
    p: *const f64,
    n: usize,
    split: usize,
    out: *mut f64,
) -> OrdistackStatus {
    guard(|| {
        let probs = difference_from_thresholds(&threshold_arg(p, n)?, split)?;
        slice_out(out, n + 1, "out")?.copy_from_slice(probs.as_slice());
        Ok(())
    })
}

/// Class probabilities (`n + 1` entries) from conditional threshold
/// probabilities rooted at `split`.
///
/// # Safety
/// `p` must hold `n` doubles and `out` `n + 1`.
#[no_mangle]
pub unsafe extern "C" fn ordistack_tree_class_probs(
    p: *const f64,
    n: usize,
    split: usize,
    out: *mut f64,
) -> OrdistackStatus {
    guard(|| {
        let probs = eq1_class_probs(&threshold_arg(p, n)?, split)?;
        slice_out(out, n + 1, "out")?.copy_from_slice(probs.as_slice());
        Ok(())
    })
}

/// Polychoric correlation of a `rows × cols` row-major count table.
///
/// # Safety
/// `counts` must hold `rows * cols` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ordistack_polychoric(
    counts: *const u64,
    rows: usize,
    cols: usize,
    out: *mut f64,
) -> OrdistackStatus {
    guard(|| {
        let len = rows.checked_mul(cols).ok_or_else(|| invalid("table size overflows"))?;
        let data = slice_arg(counts, len, "counts")?.to_vec();
        let table = Array2::from_shape_vec((rows, cols), data).map_err(|e| invalid(e.to_string()))?;
        let rho = polychoric(&ContingencyTable::new(table)?)?;
        *out.as_mut().ok_or_else(|| null("out"))? = rho;
        Ok(())
    })
}
