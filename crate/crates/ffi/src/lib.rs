//! C interface to `simpair`.
//!
//! Pairs are opaque handles created from JSON and released with
//! [`sp_pair_free`]. Every fallible call returns an [`SpStatus`]; on failure
//! [`sp_last_error_message`] describes the error for the calling thread.
//! Strings returned through out-parameters are owned by the caller and must
//! be released with [`sp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use simpair::glenum::GlGuard;
use simpair::{canonicalize, io, orbit_eq_brute, orbit_eq_by_ranks, orbit_eq_canonical, Error, MatrixPair};

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpStatus {
    Ok = 0,
    InputError = 2,
    VerificationError = 3,
    NullPointer = 4,
    Panic = 5,
}

/// Decision procedure for [`sp_orbit_eq`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpMethod {
    Canonical = 0,
    Rank = 1,
    Brute = 2,
}

/// A validated pair of square matrices over one field.
pub struct SpPair {
    inner: MatrixPair,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> SpStatus {
    match e {
        Error::Verification(_) => SpStatus::VerificationError,
        _ => SpStatus::InputError,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), SpStatus>) -> SpStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            SpStatus::Panic
        }
    }
}

fn fail(e: Error) -> SpStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> SpStatus {
    set_error(format!("{what} is null"));
    SpStatus::NullPointer
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), SpStatus> {
    let c = CString::new(s).map_err(|_| fail(Error::Verification("interior NUL in output".into())))?;
    // SAFETY: caller checked `out` is non-null.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Parse a pair from NUL-terminated JSON. `default_field` may be null or a
/// field name such as `"Q"` or `"F7"`, used when the JSON names none.
///
/// # Safety
/// `json` and `default_field` must be null or valid C strings; `out` must be
/// null or writable.
#[no_mangle]
pub unsafe extern "C" fn sp_pair_from_json(
    json: *const c_char,
    default_field: *const c_char,
    out: *mut *mut SpPair,
) -> SpStatus {
    guarded(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|_| fail(Error::Parse("json is not UTF-8".into())))?;
        let field = if default_field.is_null() {
            None
        } else {
            let name = CStr::from_ptr(default_field)
                .to_str()
                .map_err(|_| fail(Error::Parse("field name is not UTF-8".into())))?;
            Some(io::parse_field_name(name).map_err(fail)?)
        };
        let inner = io::pair_from_str(text, field).map_err(fail)?;
        *out = Box::into_raw(Box::new(SpPair { inner }));
        Ok(())
    })
}

/// Release a pair. Null is ignored.
///
/// # Safety
/// `pair` must be null or a handle from [`sp_pair_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sp_pair_free(pair: *mut SpPair) {
    if !pair.is_null() {
        drop(Box::from_raw(pair));
    }
}

/// Matrix size of a pair, or 0 for null.
///
/// # Safety
/// `pair` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sp_pair_size(pair: *const SpPair) -> usize {
    pair.as_ref().map_or(0, |p| p.inner.n())
}

/// The pair as JSON.
///
/// # Safety
/// `pair` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn sp_pair_to_json(pair: *const SpPair, out: *mut *mut c_char) -> SpStatus {
    guarded(|| {
        let p = pair.as_ref().ok_or_else(|| null("pair"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        out_string(io::to_pretty(&io::pair_to_json(&p.inner)), out)
    })
}

/// Canonical form and conjugating matrix as JSON.
///
/// # Safety
/// `pair` must be null or a live handle; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn sp_canonicalize_json(pair: *const SpPair, out: *mut *mut c_char) -> SpStatus {
    guarded(|| {
        let p = pair.as_ref().ok_or_else(|| null("pair"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = canonicalize(&p.inner).map_err(fail)?;
        out_string(io::to_pretty(&io::canon_result_to_json(&r)), out)
    })
}

/// Decide whether `a` and `b` are simultaneously similar. Writes 1 or 0 to
/// `equal`. `max_gl_order` bounds the brute-force method; 0 selects the
/// library default.
///
/// # Safety
/// `a`, `b` must be null or live handles; `equal` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn sp_orbit_eq(
    a: *const SpPair,
    b: *const SpPair,
    method: SpMethod,
    max_gl_order: u64,
    equal: *mut c_int,
) -> SpStatus {
    guarded(|| {
        let a = a.as_ref().ok_or_else(|| null("a"))?;
        let b = b.as_ref().ok_or_else(|| null("b"))?;
        if equal.is_null() {
            return Err(null("equal"));
        }
        let (p, q) = (&a.inner, &b.inner);
        let eq = match method {
            SpMethod::Canonical => orbit_eq_canonical(p, q),
            SpMethod::Rank => orbit_eq_by_ranks(p, q).map(|r| r.is_equal()),
            SpMethod::Brute => {
                let mut guard = GlGuard::default();
                if max_gl_order > 0 {
                    guard.max_order = max_gl_order as u128;
                }
                orbit_eq_brute(p, q, &guard)
            }
        }
        .map_err(fail)?;
        *equal = c_int::from(eq);
        Ok(())
    })
}

/// Separation report from the rank probes, as JSON.
///
/// # Safety
/// `a`, `b` must be null or live handles; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn sp_separation_report_json(
    a: *const SpPair,
    b: *const SpPair,
    out: *mut *mut c_char,
) -> SpStatus {
    guarded(|| {
        let a = a.as_ref().ok_or_else(|| null("a"))?;
        let b = b.as_ref().ok_or_else(|| null("b"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = orbit_eq_by_ranks(&a.inner, &b.inner).map_err(fail)?;
        out_string(io::to_pretty(&io::report_to_json(&r, None)), out)
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
