//! C interface to `fdz-core`.
//!
//! Rings live behind opaque `FdzRing` handles. Every fallible call returns an
//! `FdzStatus`; on failure `fdz_last_error_message` describes the error for
//! the calling thread. Strings handed out must be released with
//! `fdz_string_free`, handles with `fdz_ring_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use fdz_core::classify::ClassifyOptions;
use fdz_core::eqcheck::SearchLimits;
use fdz_core::report::{analyze_report, classify_report, eqcheck_report, to_json};
use fdz_core::ringfile::{parse_ring, serialize_ring};
use fdz_core::Error;
use num_bigint::BigInt;

/// Opaque ring handle.
pub struct FdzRing {
    ring: fdz_core::FdzRing,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdzStatus {
    Ok = 0,
    /// A required pointer argument was null.
    Null = 1,
    Parse = 2,
    InvalidRing = 3,
    Internal = 4,
    /// Input text was not UTF-8.
    Utf8 = 5,
    /// An argument was out of range.
    Argument = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).unwrap_or_default());
}

fn status_of(e: &Error) -> FdzStatus {
    match e {
        Error::Parse { .. } => FdzStatus::Parse,
        Error::InvalidRing { .. } | Error::Shape(_) => FdzStatus::InvalidRing,
        _ => FdzStatus::Internal,
    }
}

/// Run `body`, recording failures and converting panics to `Internal`.
fn guard(body: impl FnOnce() -> Result<(), (FdzStatus, String)>) -> FdzStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FdzStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            FdzStatus::Internal
        }
    }
}

fn core_err(e: Error) -> (FdzStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (FdzStatus, String) {
    (FdzStatus::Null, format!("{name} is null"))
}

unsafe fn ring_ref<'a>(handle: *const FdzRing, name: &str) -> Result<&'a fdz_core::FdzRing, (FdzStatus, String)> {
    handle.as_ref().map(|h| &h.ring).ok_or_else(|| null(name))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), (FdzStatus, String)> {
    let c = CString::new(s).map_err(|_| (FdzStatus::Internal, "interior NUL in output".to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn write_handle(out: *mut *mut FdzRing, ring: fdz_core::FdzRing) {
    *out = Box::into_raw(Box::new(FdzRing { ring }));
}

/// Parse ring-file text into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdz_ring_parse(text: *const c_char, out: *mut *mut FdzRing) -> FdzStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text).to_str().map_err(|e| (FdzStatus::Utf8, e.to_string()))?;
        let ring = parse_ring(s).map_err(core_err)?;
        write_handle(out, ring);
        Ok(())
    })
}

/// Release a handle; null is ignored.
///
/// # Safety
/// `ring` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fdz_ring_free(ring: *mut FdzRing) {
    if !ring.is_null() {
        drop(Box::from_raw(ring));
    }
}

/// Number of additive generators.
///
/// # Safety
/// `ring` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdz_ring_rank(ring: *const FdzRing, out: *mut usize) -> FdzStatus {
    guard(|| {
        let r = ring_ref(ring, "ring")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.rank();
        Ok(())
    })
}

/// Canonical ring-file text.
///
/// # Safety
/// `ring` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdz_ring_serialize(ring: *const FdzRing, out: *mut *mut c_char) -> FdzStatus {
    guard(|| {
        let r = ring_ref(ring, "ring")?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, serialize_ring(r))
    })
}

/// The quotient `A/nA` as a new handle; `n` must be positive.
///
/// # Safety
/// `ring` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdz_reduce_mod(ring: *const FdzRing, n: u64, out: *mut *mut FdzRing) -> FdzStatus {
    guard(|| {
        let r = ring_ref(ring, "ring")?;
        if out.is_null() {
            return Err(null("out"));
        }
        if n == 0 {
            return Err((FdzStatus::Argument, "modulus must be positive".into()));
        }
        write_handle(out, r.reduce_mod_n(&BigInt::from(n)));
        Ok(())
    })
}

/// Analysis report as JSON.
///
/// # Safety
/// `ring` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdz_analyze_json(ring: *const FdzRing, out: *mut *mut c_char) -> FdzStatus {
    guard(|| {
        let r = ring_ref(ring, "ring")?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, to_json(&analyze_report(r)))
    })
}

/// Classification report as JSON.
///
/// # Safety
/// `ring` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdz_classify_json(ring: *const FdzRing, seed: u64, out: *mut *mut c_char) -> FdzStatus {
    guard(|| {
        let r = ring_ref(ring, "ring")?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_string(out, to_json(&classify_report(r, ClassifyOptions { seed, ..Default::default() })))
    })
}

/// Equivalence report for two rings as JSON; `bound` 0 selects the default.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdz_eqcheck_json(
    a: *const FdzRing,
    b: *const FdzRing,
    bound: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> FdzStatus {
    guard(|| {
        let ra = ring_ref(a, "a")?;
        let rb = ring_ref(b, "b")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mut limits = if bound == 0 { SearchLimits::default() } else { SearchLimits::with_bound(bound) };
        limits.seed = seed;
        write_string(out, to_json(&eqcheck_report(ra, rb, limits)))
    })
}

/// Release a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fdz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or an empty string. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fdz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
