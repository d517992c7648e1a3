//! C ABI over the bastag parser.
//!
//! Models are opaque handles created by `bastag_model_load` or
//! `bastag_model_train` and released with `bastag_model_free`. Every function
//! returns a `BastagStatus`; on failure `bastag_last_error_message` describes
//! the error for the calling thread. Strings returned through out-parameters
//! are UTF-8 JSON owned by the caller and released with `bastag_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use bastag::bundle::{add_expansion, train_models, ModelBundle, PipelineError};
use bastag::config::Config;
use bastag::ngram::word_tokens;
use bastag::parser::{ParseError, Parser};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BastagStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Validation = 3,
    Io = 4,
    Parse = 5,
    Internal = 6,
}

/// Opaque model handle.
pub struct BastagModel {
    bundle: ModelBundle,
    parser: Parser,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(BastagStatus, String);

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let status = match &e {
            PipelineError::Io { .. } => BastagStatus::Io,
            PipelineError::Parse(_) => BastagStatus::Parse,
            _ => BastagStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure(BastagStatus::Parse, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BastagStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BastagStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal error");
            BastagStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(BastagStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(BastagStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn handle<'a>(p: *const BastagModel) -> Result<&'a BastagModel, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(BastagStatus::NullPointer, "model is null".into()))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(BastagStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn wrap(bundle: ModelBundle) -> Result<*mut BastagModel, Failure> {
    let config = bundle
        .config
        .clone()
        .with_env_overrides()
        .map_err(|e| Failure(BastagStatus::Validation, e.to_string()))?;
    let parser = bundle
        .parser()
        .map_err(|e| Failure(BastagStatus::Validation, e.to_string()))?
        .with_config(config);
    Ok(Box::into_raw(Box::new(BastagModel { bundle, parser })))
}

fn json_out(value: &impl serde::Serialize, out: *mut *mut c_char) -> Result<(), Failure> {
    let s = serde_json::to_string(value).map_err(|e| Failure(BastagStatus::Internal, e.to_string()))?;
    let c = CString::new(s).map_err(|e| Failure(BastagStatus::Internal, e.to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Loads a model bundle from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bastag_model_load(path: *const c_char, out: *mut *mut BastagModel) -> BastagStatus {
    guard(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let path = text(path, "path")?;
        *out = wrap(ModelBundle::load(Path::new(path))?)?;
        Ok(())
    })
}

/// Trains a model from a lexicon file, a phrase corpus and an equipment
/// corpus using the default configuration plus environment overrides.
///
/// # Safety
/// All strings must be NUL-terminated and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bastag_model_train(
    lexicon: *const c_char,
    phrases: *const c_char,
    equipment: *const c_char,
    out: *mut *mut BastagModel,
) -> BastagStatus {
    guard(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let (l, p, e) = (text(lexicon, "lexicon")?, text(phrases, "phrases")?, text(equipment, "equipment")?);
        let config = Config::default()
            .with_env_overrides()
            .map_err(|e| Failure(BastagStatus::Validation, e.to_string()))?;
        *out = wrap(train_models(Path::new(l), Path::new(p), Path::new(e), config)?)?;
        Ok(())
    })
}

/// Writes the model bundle to `path`.
///
/// # Safety
/// `model` must come from this library and `path` be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn bastag_model_save(model: *const BastagModel, path: *const c_char) -> BastagStatus {
    guard(|| {
        let m = handle(model)?;
        m.bundle.save(Path::new(text(path, "path")?))?;
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bastag_model_free(model: *mut BastagModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Best parse of `input` as a JSON object with `input`, `chunks` and
/// `total_weight`.
///
/// # Safety
/// `model` must come from this library, `input` be NUL-terminated and
/// `out_json` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bastag_parse(
    model: *const BastagModel,
    input: *const c_char,
    out_json: *mut *mut c_char,
) -> BastagStatus {
    guard(|| {
        check_out(out_json)?;
        *out_json = ptr::null_mut();
        let m = handle(model)?;
        let result = m.parser.parse(text(input, "input")?)?;
        json_out(&result, out_json)
    })
}

/// Up to `k` parses of `input`, best first, as a JSON array.
///
/// # Safety
/// As for `bastag_parse`.
#[no_mangle]
pub unsafe extern "C" fn bastag_parse_k_best(
    model: *const BastagModel,
    input: *const c_char,
    k: usize,
    out_json: *mut *mut c_char,
) -> BastagStatus {
    guard(|| {
        check_out(out_json)?;
        *out_json = ptr::null_mut();
        let m = handle(model)?;
        if k == 0 {
            return Err(Failure(BastagStatus::Validation, "k must be at least 1".into()));
        }
        let results = m.parser.k_best(text(input, "input")?, k)?;
        json_out(&results, out_json)
    })
}

/// Creates a new model with `surface` expanding to the space-separated
/// `tags`. The original model is unchanged.
///
/// # Safety
/// `model` must come from this library, the strings be NUL-terminated and
/// `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bastag_add_expansion(
    model: *const BastagModel,
    surface: *const c_char,
    tags: *const c_char,
    out: *mut *mut BastagModel,
) -> BastagStatus {
    guard(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let m = handle(model)?;
        let surface = text(surface, "surface")?.to_lowercase();
        let tags = word_tokens(text(tags, "tags")?);
        *out = wrap(add_expansion(&m.bundle, &surface, &tags)?)?;
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bastag_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn bastag_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
