//! C ABI for the `lsplus` toolkit.
//!
//! Graphs, certificate packages and verification reports cross the boundary
//! as opaque handles created by `lsplus_*_new`/`_load` functions and released
//! with the matching `_free`. Every fallible function returns an
//! [`LsplusStatus`]; the message of the most recent failure on the calling
//! thread is available through [`lsplus_last_error`]. Strings are returned by
//! copying into a caller buffer: the required size (including the trailing
//! NUL) is always written to `needed`, and `LSPLUS_STATUS_BUFFER_TOO_SMALL` is
//! returned when `len` is smaller.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use lsplus::certify::{self, CertificatePackage, VerificationReport};
use lsplus::graphs::{canonical_form, graph6_decode, graph6_encode, Graph};
use lsplus::polytope::Inequality;
use lsplus::rankbounds::rank_upper_bound;

/// Result codes shared by every function of the library.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LsplusStatus {
    /// Success, or an accepting verdict.
    Ok = 0,
    /// The call completed and the verdict is negative.
    Reject = 1,
    /// A required pointer argument was null.
    NullPointer = 2,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 3,
    /// A graph6 string or inequality could not be parsed.
    Parse = 4,
    /// A certificate package could not be read or written.
    Io = 5,
    /// Input was well formed but structurally invalid (dimensions, tags, levels).
    Malformed = 6,
    /// The caller buffer is too small; `needed` holds the required size.
    BufferTooSmall = 7,
    /// An internal panic was caught at the boundary.
    Internal = 8,
}

/// Opaque graph handle.
pub struct LsplusGraph(Graph);

/// Opaque certificate package handle.
pub struct LsplusPackage(CertificatePackage);

/// Opaque verification report handle.
pub struct LsplusReport(VerificationReport);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message.into());
}

fn fail(status: LsplusStatus, message: impl Into<String>) -> LsplusStatus {
    set_error(message);
    status
}

/// Runs `f`, mapping a panic to `Internal`.
fn guard(f: impl FnOnce() -> LsplusStatus) -> LsplusStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(LsplusStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, LsplusStatus> {
    if s.is_null() {
        return Err(fail(LsplusStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(LsplusStatus::InvalidUtf8, e.to_string()))
}

/// Copies `text` into `buf` without touching the last-error slot.
unsafe fn copy_out(text: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> LsplusStatus {
    let size = text.len() + 1;
    if !needed.is_null() {
        *needed = size;
    }
    if buf.is_null() || len < size {
        return LsplusStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    LsplusStatus::Ok
}

unsafe fn write_str(text: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> LsplusStatus {
    let status = copy_out(text, buf, len, needed);
    if status == LsplusStatus::BufferTooSmall {
        set_error(format!("buffer of {len} bytes, need {}", text.len() + 1));
    }
    status
}

fn certify_status(e: &certify::CertifyError) -> LsplusStatus {
    match e {
        certify::CertifyError::Io { .. } => LsplusStatus::Io,
        certify::CertifyError::Csv { .. } | certify::CertifyError::Graph(_) => LsplusStatus::Parse,
        _ => LsplusStatus::Malformed,
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Static, NUL-terminated name of a status code.
#[no_mangle]
pub extern "C" fn lsplus_status_name(status: LsplusStatus) -> *const c_char {
    let name: &'static [u8] = match status {
        LsplusStatus::Ok => b"LSPLUS_STATUS_OK\0",
        LsplusStatus::Reject => b"LSPLUS_STATUS_REJECT\0",
        LsplusStatus::NullPointer => b"LSPLUS_STATUS_NULL_POINTER\0",
        LsplusStatus::InvalidUtf8 => b"LSPLUS_STATUS_INVALID_UTF8\0",
        LsplusStatus::Parse => b"LSPLUS_STATUS_PARSE\0",
        LsplusStatus::Io => b"LSPLUS_STATUS_IO\0",
        LsplusStatus::Malformed => b"LSPLUS_STATUS_MALFORMED\0",
        LsplusStatus::BufferTooSmall => b"LSPLUS_STATUS_BUFFER_TOO_SMALL\0",
        LsplusStatus::Internal => b"LSPLUS_STATUS_INTERNAL\0",
    };
    name.as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf`.
#[no_mangle]
pub unsafe extern "C" fn lsplus_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> LsplusStatus {
    let message = LAST_ERROR.with(|e| e.borrow().clone());
    copy_out(&message, buf, len, needed)
}

/// Decodes a graph6 string into a new graph handle.
#[no_mangle]
pub unsafe extern "C" fn lsplus_graph_from_graph6(graph6: *const c_char, out: *mut *mut LsplusGraph) -> LsplusStatus {
    guard(|| {
        if out.is_null() {
            return fail(LsplusStatus::NullPointer, "null output handle");
        }
        *out = ptr::null_mut();
        let s = try_status!(read_str(graph6));
        match graph6_decode(s.trim()) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(LsplusGraph(g)));
                LsplusStatus::Ok
            }
            Err(e) => fail(LsplusStatus::Parse, e.to_string()),
        }
    })
}

/// Releases a graph handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lsplus_graph_free(g: *mut LsplusGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn lsplus_graph_order(g: *const LsplusGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Number of edges, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn lsplus_graph_edge_count(g: *const LsplusGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Copies the graph6 encoding of `g` into `buf`.
#[no_mangle]
pub unsafe extern "C" fn lsplus_graph_graph6(
    g: *const LsplusGraph,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> LsplusStatus {
    guard(|| match g.as_ref() {
        Some(g) => write_str(&graph6_encode(&g.0), buf, len, needed),
        None => fail(LsplusStatus::NullPointer, "null graph handle"),
    })
}

/// Copies the canonical graph6 form of `g` into `buf`.
#[no_mangle]
pub unsafe extern "C" fn lsplus_graph_canonical(
    g: *const LsplusGraph,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> LsplusStatus {
    guard(|| match g.as_ref() {
        Some(g) => write_str(&canonical_form(&g.0), buf, len, needed),
        None => fail(LsplusStatus::NullPointer, "null graph handle"),
    })
}

/// Rule-based upper bound on the LS+ rank of `g` with the given depth budget.
#[no_mangle]
pub unsafe extern "C" fn lsplus_rank_upper_bound(g: *const LsplusGraph, depth: u32, bound: *mut usize) -> LsplusStatus {
    guard(|| {
        let (Some(g), false) = (g.as_ref(), bound.is_null()) else {
            return fail(LsplusStatus::NullPointer, "null graph or output");
        };
        *bound = rank_upper_bound(&g.0, depth).0;
        LsplusStatus::Ok
    })
}

/// Loads a certificate package directory into a new package handle.
#[no_mangle]
pub unsafe extern "C" fn lsplus_package_load(dir: *const c_char, out: *mut *mut LsplusPackage) -> LsplusStatus {
    guard(|| {
        if out.is_null() {
            return fail(LsplusStatus::NullPointer, "null output handle");
        }
        *out = ptr::null_mut();
        let dir = try_status!(read_str(dir));
        match certify::load_package(Path::new(dir)) {
            Ok(pkg) => {
                *out = Box::into_raw(Box::new(LsplusPackage(pkg)));
                LsplusStatus::Ok
            }
            Err(e) => fail(certify_status(&e), e.to_string()),
        }
    })
}

/// Releases a package handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lsplus_package_free(pkg: *mut LsplusPackage) {
    if !pkg.is_null() {
        drop(Box::from_raw(pkg));
    }
}

/// LS+ level of a package, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn lsplus_package_level(pkg: *const LsplusPackage) -> u8 {
    pkg.as_ref().map_or(0, |p| p.0.level)
}

/// Verifies `pkg`. `g` may be null to use the graph named by the package;
/// `inequality` may be null to use the package's own inequality (if any),
/// otherwise it is a CSV row `a_1,…,a_n,beta`. On `LSPLUS_STATUS_OK` or
/// `LSPLUS_STATUS_REJECT` a report handle is stored in `out`.
#[no_mangle]
pub unsafe extern "C" fn lsplus_package_verify(
    pkg: *const LsplusPackage,
    g: *const LsplusGraph,
    inequality: *const c_char,
    out: *mut *mut LsplusReport,
) -> LsplusStatus {
    guard(|| {
        if out.is_null() {
            return fail(LsplusStatus::NullPointer, "null output handle");
        }
        *out = ptr::null_mut();
        let Some(pkg) = pkg.as_ref() else {
            return fail(LsplusStatus::NullPointer, "null package handle");
        };
        let graph = match g.as_ref() {
            Some(g) => g.0.clone(),
            None => match certify::package_graph(&pkg.0) {
                Ok(Some(g)) => g,
                Ok(None) => return fail(LsplusStatus::NullPointer, "package names no graph and none was given"),
                Err(e) => return fail(certify_status(&e), e.to_string()),
            },
        };
        let ineq = if inequality.is_null() {
            pkg.0.inequality.clone()
        } else {
            let s = try_status!(read_str(inequality));
            match Inequality::parse_csv_row(s) {
                Ok(i) => Some(i),
                Err(e) => return fail(LsplusStatus::Parse, e.to_string()),
            }
        };
        let report = match &ineq {
            Some(i) => certify::verify_rank_certificate(&graph, i, &pkg.0),
            None => certify::verify_package(&graph, &pkg.0),
        };
        match report {
            Ok(r) => {
                let status = if r.accepted { LsplusStatus::Ok } else { LsplusStatus::Reject };
                *out = Box::into_raw(Box::new(LsplusReport(r)));
                status
            }
            Err(e) => fail(certify_status(&e), e.to_string()),
        }
    })
}

/// Releases a report handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn lsplus_report_free(report: *mut LsplusReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// 1 if the report accepts, 0 otherwise (including a null handle).
#[no_mangle]
pub unsafe extern "C" fn lsplus_report_accepted(report: *const LsplusReport) -> i32 {
    report.as_ref().map_or(0, |r| i32::from(r.0.accepted))
}

/// Number of failures in the report, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn lsplus_report_failure_count(report: *const LsplusReport) -> usize {
    report.as_ref().map_or(0, |r| r.0.failures.len())
}

/// Copies the report as JSON into `buf`.
#[no_mangle]
pub unsafe extern "C" fn lsplus_report_json(
    report: *const LsplusReport,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> LsplusStatus {
    guard(|| match report.as_ref() {
        Some(r) => write_str(&r.0.to_json().to_string(), buf, len, needed),
        None => fail(LsplusStatus::NullPointer, "null report handle"),
    })
}

/// Copies the human-readable report into `buf`.
#[no_mangle]
pub unsafe extern "C" fn lsplus_report_text(
    report: *const LsplusReport,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> LsplusStatus {
    guard(|| match report.as_ref() {
        Some(r) => write_str(&r.0.to_string(), buf, len, needed),
        None => fail(LsplusStatus::NullPointer, "null report handle"),
    })
}
