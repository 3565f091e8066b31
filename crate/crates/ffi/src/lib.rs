//! C ABI over `posscheck`.
//!
//! Models and t-norms are opaque handles created by `pc_model_from_json` / `pc_tnorm_parse`
//! and released with the matching `pc_*_free`. Every fallible call returns a
//! [`PcStatus`]; on failure the message is available from
//! [`pc_last_error_message`] on the same thread until the next failing call.
//! Strings returned to the caller are freed with [`pc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use posscheck::factorization::{self, Verdict};
use posscheck::independence::{self, Statement};
use posscheck::markov;
use posscheck::model::ModelFile;
use posscheck::{Error, MarkovProperty, PossibilityTable, TNorm, Tolerance, UndirectedGraph};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Model = 5,
    Unsupported = 6,
    Internal = 7,
    Panic = 8,
}

/// Three-valued answer of a check.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcAnswer {
    No = 0,
    Yes = 1,
    Unknown = 2,
}

/// Opaque t-norm handle.
pub struct PcTNorm(TNorm);

/// Opaque model handle: a normal table, its optional graph and t-norm.
pub struct PcModel {
    table: PossibilityTable<f64>,
    graph: Option<UndirectedGraph>,
    tnorm: Option<TNorm>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(PcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_) => PcStatus::Parse,
            Error::UnsupportedTNorm(_) | Error::Inexact(_) => PcStatus::Unsupported,
            Error::InternalInconsistency(_) => PcStatus::Internal,
            Error::Normality { .. } | Error::Graph(_) => PcStatus::Model,
            _ => PcStatus::InvalidArgument,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PcStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside posscheck");
            PcStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(PcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(PcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn names(p: *const c_char, what: &str) -> Result<Vec<String>, Fail> {
    if p.is_null() {
        return Ok(Vec::new());
    }
    Ok(text(p, what)?
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect())
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(PcStatus::NullPointer, format!("{what} is null")))
}

fn tolerance(epsilon: f64) -> Result<Tolerance, Fail> {
    if epsilon <= 0.0 {
        Ok(Tolerance::DEFAULT)
    } else {
        Tolerance::new(epsilon).map_err(Fail::from)
    }
}

/// Explicit handle first, then the model's own t-norm, then Gödel.
unsafe fn pick_tnorm(model: &PcModel, tnorm: *const PcTNorm) -> TNorm {
    match tnorm.as_ref() {
        Some(t) => t.0.clone(),
        None => model.tnorm.clone().unwrap_or_default(),
    }
}

fn answer(b: bool) -> PcAnswer {
    if b {
        PcAnswer::Yes
    } else {
        PcAnswer::No
    }
}

/// Message of the last failing call on this thread, or NULL. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a t-norm such as `"product"`, `"lukasiewicz@2"` or its JSON form.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out_tnorm` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_tnorm_parse(spec: *const c_char, out_tnorm: *mut *mut PcTNorm) -> PcStatus {
    guard(|| {
        let slot = out(out_tnorm, "out_tnorm")?;
        let tn: TNorm = text(spec, "spec")?
            .parse()
            .map_err(|e: Error| Fail(PcStatus::Parse, e.to_string()))?;
        *slot = Box::into_raw(Box::new(PcTNorm(tn)));
        Ok(())
    })
}

/// # Safety
/// `tnorm` must be NULL or a handle from [`pc_tnorm_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pc_tnorm_free(tnorm: *mut PcTNorm) {
    if !tnorm.is_null() {
        drop(Box::from_raw(tnorm));
    }
}

/// # Safety
/// `tnorm` must be a live handle; `out_value` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_tnorm_apply(tnorm: *const PcTNorm, a: f64, b: f64, out_value: *mut f64) -> PcStatus {
    guard(|| {
        let tn = tnorm.as_ref().ok_or_else(|| Fail(PcStatus::NullPointer, "tnorm is null".into()))?;
        *out(out_value, "out_value")? = tn.0.apply(&a, &b)?;
        Ok(())
    })
}

/// Residual `y Δ x`: the largest `z` with `T(z, x) <= y` (1 when `x <= y`).
///
/// # Safety
/// `tnorm` must be a live handle; `out_value` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_tnorm_residual(tnorm: *const PcTNorm, y: f64, x: f64, out_value: *mut f64) -> PcStatus {
    guard(|| {
        let tn = tnorm.as_ref().ok_or_else(|| Fail(PcStatus::NullPointer, "tnorm is null".into()))?;
        *out(out_value, "out_value")? = tn.0.residual(&y, &x)?;
        Ok(())
    })
}

/// Folds `len` values with the t-norm (1 for an empty array).
///
/// # Safety
/// `values` must point to `len` readable doubles (may be NULL when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn pc_tnorm_fold(
    tnorm: *const PcTNorm,
    values: *const f64,
    len: usize,
    out_value: *mut f64,
) -> PcStatus {
    guard(|| {
        let tn = tnorm.as_ref().ok_or_else(|| Fail(PcStatus::NullPointer, "tnorm is null".into()))?;
        let vals: &[f64] = if len == 0 {
            &[]
        } else if values.is_null() {
            return Err(Fail(PcStatus::NullPointer, "values is null".into()));
        } else {
            std::slice::from_raw_parts(values, len)
        };
        *out(out_value, "out_value")? = tn.0.fold(vals.iter())?;
        Ok(())
    })
}

/// Loads a model from its JSON text (the format read by the command line).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out_model` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pc_model_from_json(json: *const c_char, out_model: *mut *mut PcModel) -> PcStatus {
    guard(|| {
        let slot = out(out_model, "out_model")?;
        let m = ModelFile::from_json(text(json, "json")?)?;
        let model_error = |e: Error| Fail(PcStatus::Model, e.to_string());
        let model = PcModel {
            table: m.table(Tolerance::DEFAULT).map_err(model_error)?,
            graph: m.graph().map_err(model_error)?,
            tnorm: m.tnorm,
        };
        *slot = Box::into_raw(Box::new(model));
        Ok(())
    })
}

/// # Safety
/// `model` must be NULL or a handle from [`pc_model_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pc_model_free(model: *mut PcModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of variables in the model, 0 for NULL.
///
/// # Safety
/// `model` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pc_model_variable_count(model: *const PcModel) -> usize {
    model.as_ref().map_or(0, |m| m.table.schema().len())
}

/// Tests `I(a, b | given)`; the sets are comma-separated variable names and
/// `given` may be NULL or empty. `tnorm` may be NULL (model's t-norm, else
/// Gödel); `epsilon <= 0` selects the default tolerance.
///
/// # Safety
/// Pointers must be NULL (where allowed) or valid; `out_answer` writable.
#[no_mangle]
pub unsafe extern "C" fn pc_independent(
    model: *const PcModel,
    tnorm: *const PcTNorm,
    a: *const c_char,
    b: *const c_char,
    given: *const c_char,
    epsilon: f64,
    out_answer: *mut PcAnswer,
) -> PcStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| Fail(PcStatus::NullPointer, "model is null".into()))?;
        let slot = out(out_answer, "out_answer")?;
        let stmt = Statement { a: names(a, "a")?, b: names(b, "b")?, given: names(given, "given")? };
        let tn = pick_tnorm(m, tnorm);
        let r = independence::independent(&m.table, &tn, &stmt, tolerance(epsilon)?)?;
        *slot = answer(r.holds);
        Ok(())
    })
}

/// Checks a Markov property (`"pairwise"`, `"local"` or `"global"`) against
/// the model's graph.
///
/// # Safety
/// Pointers must be NULL (where allowed) or valid; `out_answer` writable.
#[no_mangle]
pub unsafe extern "C" fn pc_markov(
    model: *const PcModel,
    tnorm: *const PcTNorm,
    property: *const c_char,
    epsilon: f64,
    out_answer: *mut PcAnswer,
) -> PcStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| Fail(PcStatus::NullPointer, "model is null".into()))?;
        let slot = out(out_answer, "out_answer")?;
        let p: MarkovProperty = text(property, "property")?.parse()?;
        let g = m.graph.as_ref().ok_or_else(|| Fail(PcStatus::Model, "the model has no graph".into()))?;
        let tn = pick_tnorm(m, tnorm);
        let r = markov::check(p, &m.table, g, &tn, tolerance(epsilon)?, false)?;
        *slot = answer(r.holds);
        Ok(())
    })
}

/// Decides factorization over the cliques of the model's graph. When
/// `out_json` is non-NULL it receives the verdict as JSON (free with
/// [`pc_string_free`]).
///
/// # Safety
/// Pointers must be NULL (where allowed) or valid; `out_answer` writable.
#[no_mangle]
pub unsafe extern "C" fn pc_factorizes(
    model: *const PcModel,
    tnorm: *const PcTNorm,
    epsilon: f64,
    out_answer: *mut PcAnswer,
    out_json: *mut *mut c_char,
) -> PcStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| Fail(PcStatus::NullPointer, "model is null".into()))?;
        let slot = out(out_answer, "out_answer")?;
        let g = m.graph.as_ref().ok_or_else(|| Fail(PcStatus::Model, "the model has no graph".into()))?;
        let tn = pick_tnorm(m, tnorm);
        let verdict = factorization::factorizes(&m.table, g, &tn, tolerance(epsilon)?)?;
        *slot = match verdict {
            Verdict::Yes { .. } => PcAnswer::Yes,
            Verdict::No { .. } => PcAnswer::No,
            Verdict::Unknown { .. } => PcAnswer::Unknown,
        };
        if let Some(js) = out_json.as_mut() {
            let s = serde_json::to_string(&verdict).map_err(|e| Fail(PcStatus::Internal, e.to_string()))?;
            *js = CString::new(s).map_err(|e| Fail(PcStatus::Internal, e.to_string()))?.into_raw();
        }
        Ok(())
    })
}

/// Exit-code style summary used by bindings: 0 yes, 1 no, 2 unknown.
#[no_mangle]
pub extern "C" fn pc_answer_code(answer: PcAnswer) -> c_int {
    match answer {
        PcAnswer::Yes => 0,
        PcAnswer::No => 1,
        PcAnswer::Unknown => 2,
    }
}
