//! C ABI for the quiverdepth engine.
//!
//! The surface is a handle-based API: build a `QdExtension` from a named
//! family or a quiver description, then query depths and tensor
//! dimensions. All strings are NUL-terminated UTF-8; strings returned by
//! the library must be released with `qd_string_free`. Handles are not
//! thread-safe; use one handle per thread (results are cached inside the
//! handle, so repeated queries are cheap).
//!
//! Every fallible call returns a `QdStatus`; on failure,
//! `qd_last_error_message` returns a description of what went wrong
//! (thread-local, valid until the next failing call on that thread).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::str::FromStr;

use quiverdepth::algebra::{path_algebra, subalgebra_closure, SubalgebraEmbedding};
use quiverdepth::cli::parse_generator_file;
use quiverdepth::depth::{DepthEngine, DepthValue};
use quiverdepth::error::Error;
use quiverdepth::families::{arrow_subalgebra, jordan_subalgebra, t_n, top_subalgebra};
use quiverdepth::field::{Field, FieldSpec, PrimeField, Rationals};
use quiverdepth::quiver::Quiver;

/// Result codes of the C API.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QdStatus {
    /// Success.
    QdOk = 0,
    /// A required pointer argument was NULL.
    QdNullArgument = 1,
    /// A string argument was not valid UTF-8.
    QdInvalidUtf8 = 2,
    /// The input was rejected (parse or validation failure).
    QdInvalidInput = 3,
    /// The computation itself failed.
    QdComputeError = 4,
}

/// Opaque handle to a subalgebra pair plus its cached depth engine.
#[repr(C)]
pub struct QdExtension {
    _opaque: [u8; 0],
}

enum EitherEngine {
    Rational(DepthEngine<Rationals>),
    Prime(DepthEngine<PrimeField>),
}

struct Inner {
    engine: EitherEngine,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

/// Message of the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread. Never NULL.
#[no_mangle]
pub extern "C" fn qd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn status_of(err: &Error) -> QdStatus {
    match err {
        Error::Parse { .. }
        | Error::Field(_)
        | Error::Invalid(_)
        | Error::CyclicQuiver(_)
        | Error::NotAnIdeal(_)
        | Error::NotIdempotent(_) => QdStatus::QdInvalidInput,
        _ => QdStatus::QdComputeError,
    }
}

unsafe fn utf8_arg<'a>(ptr: *const c_char) -> Result<&'a str, QdStatus> {
    if ptr.is_null() {
        set_error("NULL string argument");
        return Err(QdStatus::QdNullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        QdStatus::QdInvalidUtf8
    })
}

enum Source {
    Family(usize),
    QuiverText(String),
}

fn build_embedding_generic<F: Field>(
    field: F,
    source: &Source,
    selector: &str,
    custom: Option<&str>,
) -> Result<SubalgebraEmbedding<F>, Error> {
    let ambient = match source {
        Source::Family(n) => t_n(*n, field)?,
        Source::QuiverText(text) => {
            let quiver = Quiver::parse(text)?;
            if !quiver.validate().acyclic {
                return Err(Error::CyclicQuiver("quiver has a directed cycle".into()));
            }
            path_algebra(&quiver, field)?
        }
    };
    match selector {
        "top" | "diagonal" => top_subalgebra(&ambient),
        "arrow" => arrow_subalgebra(&ambient),
        "jordan" => match source {
            Source::Family(n) => jordan_subalgebra(*n, ambient.field().clone()),
            Source::QuiverText(_) => Err(Error::invalid(
                "the jordan selector is only defined for the linear family",
            )),
        },
        "custom" => {
            let text =
                custom.ok_or_else(|| Error::invalid("selector 'custom' needs generator text"))?;
            let gens = parse_generator_file(text, &ambient)?;
            subalgebra_closure(&ambient, &gens)
        }
        other => Err(Error::invalid(format!(
            "unknown selector '{other}' (top|arrow|diagonal|jordan|custom)"
        ))),
    }
}

fn build_handle(
    source: Source,
    selector: &str,
    custom: Option<&str>,
    field: &str,
) -> Result<*mut QdExtension, (QdStatus, String)> {
    let spec = FieldSpec::from_str(field).map_err(|e| (QdStatus::QdInvalidInput, e.to_string()))?;
    let engine = match spec {
        FieldSpec::Rationals => {
            let e = build_embedding_generic(Rationals, &source, selector, custom)
                .map_err(|e| (status_of(&e), e.to_string()))?;
            EitherEngine::Rational(DepthEngine::new(e).map_err(|e| (status_of(&e), e.to_string()))?)
        }
        FieldSpec::PrimeField(p) => {
            let f = PrimeField::new(p).map_err(|e| (QdStatus::QdInvalidInput, e.to_string()))?;
            let e = build_embedding_generic(f, &source, selector, custom)
                .map_err(|e| (status_of(&e), e.to_string()))?;
            EitherEngine::Prime(DepthEngine::new(e).map_err(|e| (status_of(&e), e.to_string()))?)
        }
    };
    let inner = Box::new(Inner { engine });
    Ok(Box::into_raw(inner) as *mut QdExtension)
}

/// Builds a handle for the linear family T_n with a named subalgebra
/// (`top`, `diagonal`, `arrow` or `jordan`). Returns NULL on failure; see
/// `qd_last_error_message`.
///
/// # Safety
/// `selector` and `field` must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn qd_extension_family(
    n: u32,
    selector: *const c_char,
    field: *const c_char,
) -> *mut QdExtension {
    let Ok(selector) = utf8_arg(selector) else {
        return std::ptr::null_mut();
    };
    let Ok(field) = utf8_arg(field) else {
        return std::ptr::null_mut();
    };
    match build_handle(Source::Family(n as usize), selector, None, field) {
        Ok(h) => h,
        Err((_, msg)) => {
            set_error(&msg);
            std::ptr::null_mut()
        }
    }
}

/// Builds a handle from a quiver description in the text format
/// (`vertices <n>` then `arrow <label> <src> <tgt>` lines). Selector
/// `jordan` is rejected here. Returns NULL on failure.
///
/// # Safety
/// All pointer arguments must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn qd_extension_from_quiver(
    quiver_text: *const c_char,
    selector: *const c_char,
    field: *const c_char,
) -> *mut QdExtension {
    let (Ok(text), Ok(selector), Ok(field)) =
        (utf8_arg(quiver_text), utf8_arg(selector), utf8_arg(field))
    else {
        return std::ptr::null_mut();
    };
    match build_handle(Source::QuiverText(text.to_string()), selector, None, field) {
        Ok(h) => h,
        Err((_, msg)) => {
            set_error(&msg);
            std::ptr::null_mut()
        }
    }
}

/// Builds a handle with a custom subalgebra: `generators` holds one
/// generator per line as `[coeff*]<path-label>` sums (`1` is the unit).
/// `quiver_text` may be NULL, in which case `family_n` selects T_n.
///
/// # Safety
/// Non-NULL pointers must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn qd_extension_custom(
    quiver_text: *const c_char,
    family_n: u32,
    generators: *const c_char,
    field: *const c_char,
) -> *mut QdExtension {
    let (Ok(generators), Ok(field)) = (utf8_arg(generators), utf8_arg(field)) else {
        return std::ptr::null_mut();
    };
    let source = if quiver_text.is_null() {
        Source::Family(family_n as usize)
    } else {
        let Ok(text) = utf8_arg(quiver_text) else {
            return std::ptr::null_mut();
        };
        Source::QuiverText(text.to_string())
    };
    match build_handle(source, "custom", Some(generators), field) {
        Ok(h) => h,
        Err((_, msg)) => {
            set_error(&msg);
            std::ptr::null_mut()
        }
    }
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `handle` must come from a `qd_extension_*` constructor and not have
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn qd_extension_free(handle: *mut QdExtension) {
    if !handle.is_null() {
        drop(Box::from_raw(handle as *mut Inner));
    }
}

unsafe fn inner_mut<'a>(handle: *mut QdExtension) -> Result<&'a mut Inner, QdStatus> {
    if handle.is_null() {
        set_error("NULL handle");
        return Err(QdStatus::QdNullArgument);
    }
    Ok(&mut *(handle as *mut Inner))
}

fn depth_out(v: DepthValue, out_value: &mut u32, out_resolved: &mut bool) {
    match v {
        DepthValue::Resolved(d) => {
            *out_value = d;
            *out_resolved = true;
        }
        DepthValue::AtLeast(d) => {
            *out_value = d;
            *out_resolved = false;
        }
    }
}

/// Minimum depth up to `cutoff`. On success `*out_value` holds the depth
/// when `*out_resolved` is true, or a certified lower bound otherwise.
///
/// # Safety
/// `handle` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qd_min_depth(
    handle: *mut QdExtension,
    cutoff: u32,
    out_value: *mut u32,
    out_resolved: *mut bool,
) -> QdStatus {
    let inner = match inner_mut(handle) {
        Ok(i) => i,
        Err(s) => return s,
    };
    if out_value.is_null() || out_resolved.is_null() {
        set_error("NULL output pointer");
        return QdStatus::QdNullArgument;
    }
    if cutoff == 0 {
        set_error("cutoff must be at least 1");
        return QdStatus::QdInvalidInput;
    }
    let result = match &mut inner.engine {
        EitherEngine::Rational(e) => e.min_depth(cutoff),
        EitherEngine::Prime(e) => e.min_depth(cutoff),
    };
    match result {
        Ok(v) => {
            depth_out(v, &mut *out_value, &mut *out_resolved);
            QdStatus::QdOk
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Dimension of the tensor power `C_n(A,B)` (`n = 0` gives `dim B`).
///
/// # Safety
/// `handle` must be a live handle; `out_dim` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qd_tensor_dim(
    handle: *mut QdExtension,
    n: u32,
    out_dim: *mut usize,
) -> QdStatus {
    let inner = match inner_mut(handle) {
        Ok(i) => i,
        Err(s) => return s,
    };
    if out_dim.is_null() {
        set_error("NULL output pointer");
        return QdStatus::QdNullArgument;
    }
    let result = match &mut inner.engine {
        EitherEngine::Rational(e) => e.chain_mut().dim_c_n(n as usize),
        EitherEngine::Prime(e) => e.chain_mut().dim_c_n(n as usize),
    };
    match result {
        Ok(d) => {
            *out_dim = d;
            QdStatus::QdOk
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Full depth report as a JSON document (minimum/odd/H-depth, per-level
/// flags, cutoff, field). The string must be freed with `qd_string_free`.
///
/// # Safety
/// `handle` must be a live handle; `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qd_depth_report_json(
    handle: *mut QdExtension,
    cutoff: u32,
    out_json: *mut *mut c_char,
) -> QdStatus {
    let inner = match inner_mut(handle) {
        Ok(i) => i,
        Err(s) => return s,
    };
    if out_json.is_null() {
        set_error("NULL output pointer");
        return QdStatus::QdNullArgument;
    }
    if cutoff == 0 {
        set_error("cutoff must be at least 1");
        return QdStatus::QdInvalidInput;
    }
    let report = match &mut inner.engine {
        EitherEngine::Rational(e) => e.report(cutoff),
        EitherEngine::Prime(e) => e.report(cutoff),
    };
    match report {
        Ok(r) => {
            let json = serde_json::to_string(&r.to_json()).unwrap_or_default();
            let c = CString::new(json).unwrap_or_default();
            *out_json = c.into_raw();
            QdStatus::QdOk
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Frees a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn qd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn family_depth_through_the_c_surface() {
        unsafe {
            let h = qd_extension_family(3, c("diagonal").as_ptr(), c("q").as_ptr());
            assert!(!h.is_null());
            let mut value = 0u32;
            let mut resolved = false;
            let status = qd_min_depth(h, 6, &mut value, &mut resolved);
            assert_eq!(status, QdStatus::QdOk);
            assert!(resolved);
            assert_eq!(value, 3);
            let mut dim = 0usize;
            assert_eq!(qd_tensor_dim(h, 2, &mut dim), QdStatus::QdOk);
            assert_eq!(dim, 10);
            qd_extension_free(h);
        }
    }

    #[test]
    fn report_json_round_trips() {
        unsafe {
            let h = qd_extension_family(3, c("arrow").as_ptr(), c("q").as_ptr());
            assert!(!h.is_null());
            let mut out: *mut c_char = std::ptr::null_mut();
            assert_eq!(qd_depth_report_json(h, 6, &mut out), QdStatus::QdOk);
            let text = CStr::from_ptr(out).to_str().unwrap().to_string();
            qd_string_free(out);
            qd_extension_free(h);
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v["min_depth"], serde_json::json!(4));
        }
    }

    #[test]
    fn quiver_text_constructor() {
        unsafe {
            let text = c("vertices 2\narrow a 2 1\narrow b 2 1\n");
            let h = qd_extension_from_quiver(text.as_ptr(), c("top").as_ptr(), c("q").as_ptr());
            assert!(!h.is_null());
            let mut value = 0u32;
            let mut resolved = false;
            assert_eq!(
                qd_min_depth(h, 6, &mut value, &mut resolved),
                QdStatus::QdOk
            );
            assert_eq!((value, resolved), (3, true));
            qd_extension_free(h);
        }
    }

    #[test]
    fn custom_generators_constructor() {
        unsafe {
            let gens = c("1\na_2_1\n");
            let h = qd_extension_custom(std::ptr::null(), 2, gens.as_ptr(), c("q").as_ptr());
            assert!(!h.is_null());
            let mut value = 0u32;
            let mut resolved = false;
            assert_eq!(
                qd_min_depth(h, 6, &mut value, &mut resolved),
                QdStatus::QdOk
            );
            assert_eq!((value, resolved), (4, true));
            qd_extension_free(h);
        }
    }

    #[test]
    fn errors_set_messages_and_return_null() {
        unsafe {
            let h = qd_extension_family(3, c("middle").as_ptr(), c("q").as_ptr());
            assert!(h.is_null());
            let msg = CStr::from_ptr(qd_last_error_message())
                .to_str()
                .unwrap()
                .to_string();
            assert!(msg.contains("selector"), "{msg}");

            let h = qd_extension_family(3, c("top").as_ptr(), c("fp:6").as_ptr());
            assert!(h.is_null());

            let cyclic = c("vertices 1\narrow l 1 1\n");
            let h = qd_extension_from_quiver(cyclic.as_ptr(), c("top").as_ptr(), c("q").as_ptr());
            assert!(h.is_null());

            // null-safety of the query functions
            let mut value = 0u32;
            let mut resolved = false;
            assert_eq!(
                qd_min_depth(std::ptr::null_mut(), 6, &mut value, &mut resolved),
                QdStatus::QdNullArgument
            );
            qd_extension_free(std::ptr::null_mut());
            qd_string_free(std::ptr::null_mut());
        }
    }

    #[test]
    fn prime_field_handles() {
        unsafe {
            let h = qd_extension_family(2, c("arrow").as_ptr(), c("fp:7").as_ptr());
            assert!(!h.is_null());
            let mut value = 0u32;
            let mut resolved = false;
            assert_eq!(
                qd_min_depth(h, 6, &mut value, &mut resolved),
                QdStatus::QdOk
            );
            assert_eq!((value, resolved), (4, true));
            qd_extension_free(h);
        }
    }

    #[test]
    fn generated_header_covers_the_surface() {
        let header = std::fs::read_to_string(
            std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
                .join("include")
                .join("quiverdepth.h"),
        )
        .expect("header generated at build time");
        for symbol in [
            "qd_extension_family",
            "qd_extension_from_quiver",
            "qd_extension_custom",
            "qd_extension_free",
            "qd_min_depth",
            "qd_tensor_dim",
            "qd_depth_report_json",
            "qd_string_free",
            "qd_last_error_message",
            "QdExtension",
            "QdStatus",
        ] {
            assert!(header.contains(symbol), "missing {symbol} in header");
        }
    }
}
