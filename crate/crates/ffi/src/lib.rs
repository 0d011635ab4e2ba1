//! C ABI over the klaimdb library.
//!
//! Systems are parsed into opaque `KdbSystem` handles. Every entry point
//! returns a `KdbStatus`; on failure a message is available from
//! `kdb_last_error` on the calling thread. Strings handed out by the
//! library must be released with `kdb_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use klaimdb::cli::{errors_json, trace_jsonl};
use klaimdb::semantics::Terminal;
use klaimdb::{check_system, parse_system, render, run, System};

/// Result codes shared by all entry points.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KdbStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    IllTyped = 4,
    /// A run reached the error net.
    RuntimeError = 5,
    /// A run stopped at its step limit.
    StepLimit = 6,
    Panic = 7,
}

/// A parsed system. Opaque to C.
pub struct KdbSystem {
    sys: System,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', "\\0")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "\\0")).expect("nul bytes removed").into_raw()
}

fn guard(f: impl FnOnce() -> KdbStatus) -> KdbStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            KdbStatus::Panic
        }
    }
}

/// Parses `source` (NUL-terminated UTF-8) and stores a new handle in `*out`.
///
/// # Safety
/// `source` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kdb_parse(source: *const c_char, out: *mut *mut KdbSystem) -> KdbStatus {
    guard(|| {
        if source.is_null() || out.is_null() {
            set_error("null argument");
            return KdbStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let Ok(src) = CStr::from_ptr(source).to_str() else {
            set_error("source is not valid UTF-8");
            return KdbStatus::InvalidUtf8;
        };
        match parse_system(src) {
            Ok(sys) => {
                *out = Box::into_raw(Box::new(KdbSystem { sys }));
                KdbStatus::Ok
            }
            Err(e) => {
                set_error(e.to_string());
                KdbStatus::ParseError
            }
        }
    })
}

/// Type-checks a system. When `diagnostics` is non-null it receives a JSON
/// array of `{span, kind, message}` objects (empty when well-typed).
///
/// # Safety
/// `sys` must come from `kdb_parse`; `diagnostics` may be null.
#[no_mangle]
pub unsafe extern "C" fn kdb_check(sys: *const KdbSystem, diagnostics: *mut *mut c_char) -> KdbStatus {
    guard(|| {
        let Some(sys) = sys.as_ref() else {
            set_error("null system");
            return KdbStatus::NullArgument;
        };
        let errors = check_system(&sys.sys).err().unwrap_or_default();
        if !diagnostics.is_null() {
            *diagnostics = to_c_string(errors_json(&errors).to_string());
        }
        if errors.is_empty() {
            KdbStatus::Ok
        } else {
            set_error(errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"));
            KdbStatus::IllTyped
        }
    })
}

/// Runs a system under the seeded scheduler without type-checking it.
/// When `trace` is non-null it receives the JSON-lines trace. Returns
/// `Ok` on quiescence, `RuntimeError` or `StepLimit` otherwise.
///
/// # Safety
/// `sys` must come from `kdb_parse`; `trace` may be null.
#[no_mangle]
pub unsafe extern "C" fn kdb_run(
    sys: *const KdbSystem,
    seed: u64,
    max_steps: usize,
    trace: *mut *mut c_char,
) -> KdbStatus {
    guard(|| {
        let Some(sys) = sys.as_ref() else {
            set_error("null system");
            return KdbStatus::NullArgument;
        };
        let t = run(&sys.sys, seed, max_steps);
        if !trace.is_null() {
            *trace = to_c_string(trace_jsonl(&t));
        }
        match t.terminal {
            Terminal::Quiescent => KdbStatus::Ok,
            Terminal::Err => {
                set_error("run reached ERR");
                KdbStatus::RuntimeError
            }
            Terminal::StepLimit => {
                set_error("step limit reached");
                KdbStatus::StepLimit
            }
        }
    })
}

/// Pretty-prints a system back to source form.
///
/// # Safety
/// `sys` must come from `kdb_parse` and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kdb_render(sys: *const KdbSystem, out: *mut *mut c_char) -> KdbStatus {
    guard(|| {
        let (Some(sys), false) = (sys.as_ref(), out.is_null()) else {
            set_error("null argument");
            return KdbStatus::NullArgument;
        };
        *out = to_c_string(render(&sys.sys));
        KdbStatus::Ok
    })
}

/// The message of the last failed call on this thread, or null. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn kdb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a handle from `kdb_parse`. Null is ignored.
///
/// # Safety
/// `sys` must come from `kdb_parse` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kdb_system_free(sys: *mut KdbSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kdb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn kdb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
