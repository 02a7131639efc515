//! C ABI over the selfsim engine.
//!
//! All objects are opaque heap handles released with their `_free` function.
//! Every fallible call returns an [`SsStatus`]; on failure a message is kept
//! per thread and can be read with [`ss_last_error_message`]. Strings returned
//! to the caller must be released with [`ss_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use selfsim::cli::{check_file, DiagramFile};
use selfsim::model_nat::{alpha_map, compose, eval_monoid_term, interleave, invert, parse_map, sigma_map, AtomEnv, ResidueMap};
use selfsim::syntax::parse_monoid_term;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    EvalError = 4,
    /// The map is undefined at the requested input.
    Undefined = 5,
    Panic = 6,
}

/// A piecewise-affine partial bijection of the naturals.
pub struct SsMap {
    inner: ResidueMap,
}

/// Bindings from atom names to maps.
pub struct SsEnv {
    inner: AtomEnv,
}

/// A parsed diagram file.
pub struct SsDiagram {
    inner: DiagramFile,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap());
}

type Fallible = Result<(), (SsStatus, String)>;

fn guard(f: impl FnOnce() -> Fallible) -> SsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SsStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SsStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (SsStatus, String)> {
    if s.is_null() {
        return Err((SsStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| (SsStatus::InvalidUtf8, e.to_string()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, (SsStatus, String)> {
    p.as_ref().ok_or((SsStatus::NullPointer, "null handle".into()))
}

unsafe fn put<T>(out: *mut T, value: T) -> Fallible {
    if out.is_null() {
        return Err((SsStatus::NullPointer, "null output pointer".into()));
    }
    out.write(value);
    Ok(())
}

fn boxed(m: ResidueMap) -> *mut SsMap {
    Box::into_raw(Box::new(SsMap { inner: m }))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap().into_raw()
}

/// Message for the last failed call on this thread; empty after success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ss_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library, or be null.
#[no_mangle]
pub unsafe extern "C" fn ss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a map literal such as `{ 0/2 -> 1/2, 1/2 -> 0/2 }`.
///
/// # Safety
/// `literal` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ss_map_parse(literal: *const c_char, out: *mut *mut SsMap) -> SsStatus {
    guard(|| {
        let m = parse_map(text(literal)?).map_err(|e| (SsStatus::ParseError, e.to_string()))?;
        put(out, boxed(m))
    })
}

#[no_mangle]
pub extern "C" fn ss_map_identity() -> *mut SsMap {
    boxed(ResidueMap::identity())
}

#[no_mangle]
pub extern "C" fn ss_map_alpha() -> *mut SsMap {
    boxed(alpha_map())
}

#[no_mangle]
pub extern "C" fn ss_map_sigma() -> *mut SsMap {
    boxed(sigma_map())
}

/// Writes `map(n)`; returns `Undefined` outside the domain.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ss_map_apply(map: *const SsMap, n: u64, out: *mut u64) -> SsStatus {
    guard(|| match handle(map)?.inner.apply(n) {
        Some(v) => put(out, v),
        None => Err((SsStatus::Undefined, format!("undefined at {n}"))),
    })
}

/// `g` after `f`.
///
/// # Safety
/// `g` and `f` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ss_map_compose(g: *const SsMap, f: *const SsMap, out: *mut *mut SsMap) -> SsStatus {
    guard(|| put(out, boxed(compose(&handle(g)?.inner, &handle(f)?.inner))))
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ss_map_invert(f: *const SsMap, out: *mut *mut SsMap) -> SsStatus {
    guard(|| put(out, boxed(invert(&handle(f)?.inner))))
}

/// `f` on evens, `g` on odds.
///
/// # Safety
/// `f` and `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ss_map_interleave(f: *const SsMap, g: *const SsMap, out: *mut *mut SsMap) -> SsStatus {
    guard(|| put(out, boxed(interleave(&handle(f)?.inner, &handle(g)?.inner))))
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ss_map_equal(a: *const SsMap, b: *const SsMap, out: *mut bool) -> SsStatus {
    guard(|| put(out, handle(a)?.inner == handle(b)?.inner))
}

/// Canonical literal; release with `ss_string_free`. Null on a null handle.
///
/// # Safety
/// `map` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ss_map_to_string(map: *const SsMap) -> *mut c_char {
    match map.as_ref() {
        Some(m) => c_string(m.inner.to_string()),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `map` must come from this library and not be used afterwards, or be null.
#[no_mangle]
pub unsafe extern "C" fn ss_map_free(map: *mut SsMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

#[no_mangle]
pub extern "C" fn ss_env_new() -> *mut SsEnv {
    Box::into_raw(Box::new(SsEnv { inner: AtomEnv::new() }))
}

/// Binds `name` to a copy of `map`, replacing any earlier binding.
///
/// # Safety
/// `env` and `map` must be live handles; `name` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ss_env_bind(env: *mut SsEnv, name: *const c_char, map: *const SsMap) -> SsStatus {
    guard(|| {
        let name = text(name)?;
        if !selfsim::syntax::is_identifier(name) {
            return Err((SsStatus::ParseError, format!("invalid atom name `{name}`")));
        }
        let m = handle(map)?.inner.clone();
        let env = env.as_mut().ok_or((SsStatus::NullPointer, "null handle".to_string()))?;
        env.inner.bind(name, m);
        Ok(())
    })
}

/// # Safety
/// `env` must come from this library and not be used afterwards, or be null.
#[no_mangle]
pub unsafe extern "C" fn ss_env_free(env: *mut SsEnv) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Evaluates a monoid term such as `alpha . one # f`. `env` may be null.
///
/// # Safety
/// `term` NUL-terminated; `env` live or null; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ss_eval_term(term: *const c_char, env: *const SsEnv, out: *mut *mut SsMap) -> SsStatus {
    guard(|| {
        let empty = AtomEnv::new();
        let env = env.as_ref().map_or(&empty, |e| &e.inner);
        let invertible = |name: &str| env.get(name).is_none_or(|m| m.is_total_bijection());
        let m = parse_monoid_term(text(term)?, &invertible).map_err(|e| (SsStatus::ParseError, e.to_string()))?;
        let map = eval_monoid_term(&m, env).map_err(|e| (SsStatus::EvalError, e.to_string()))?;
        put(out, boxed(map))
    })
}

/// Parses the text of a diagram file.
///
/// # Safety
/// `source` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ss_diagram_parse(source: *const c_char, out: *mut *mut SsDiagram) -> SsStatus {
    guard(|| {
        let f = DiagramFile::parse(text(source)?).map_err(|e| (SsStatus::ParseError, e.to_string()))?;
        put(out, Box::into_raw(Box::new(SsDiagram { inner: f })))
    })
}

/// Runs every check of the diagram. Writes the verdict lines (release with
/// `ss_string_free`) and the exit code: 0 all guaranteed, 2 some refuted,
/// 1 otherwise. `env` may be null.
///
/// # Safety
/// `diagram` live; `env` live or null; `report` and `exit_code` writable.
#[no_mangle]
pub unsafe extern "C" fn ss_diagram_check(
    diagram: *const SsDiagram,
    env: *const SsEnv,
    bound: u64,
    report: *mut *mut c_char,
    exit_code: *mut i32,
) -> SsStatus {
    guard(|| {
        if bound == 0 {
            return Err((SsStatus::EvalError, "bound must be positive".into()));
        }
        if report.is_null() || exit_code.is_null() {
            return Err((SsStatus::NullPointer, "null output pointer".into()));
        }
        let d = handle(diagram)?;
        let r = check_file(&d.inner, env.as_ref().map(|e| &e.inner), bound);
        put(exit_code, r.exit_code)?;
        put(report, c_string(r.output))
    })
}

/// # Safety
/// `diagram` must come from this library and not be used afterwards, or be null.
#[no_mangle]
pub unsafe extern "C" fn ss_diagram_free(diagram: *mut SsDiagram) {
    if !diagram.is_null() {
        drop(Box::from_raw(diagram));
    }
}
