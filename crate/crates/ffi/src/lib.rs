//! C ABI over the `decor` library.
//!
//! Graphs are opaque handles built from the JSON graph format. Every call
//! returns a [`DecorStatus`]; on failure a message is kept per thread and can
//! be read with [`decor_last_error_message`]. Strings handed out by the
//! library must be released with [`decor_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use decor::{decor_with_deadline, is_commutative, run_cpr, Deadline, Error, Evidence, FactorGraph};

/// Opaque factor graph handle.
pub struct DecorGraph {
    graph: FactorGraph,
}

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecorStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    NotFound = 4,
    Timeout = 5,
    ArityLimit = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(message).ok());
}

struct Failure(DecorStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::UnknownFactor(_) | Error::UnknownVariable(_) => DecorStatus::NotFound,
            Error::ArityLimitExceeded { .. } => DecorStatus::ArityLimit,
            _ => DecorStatus::InvalidInput,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(DecorStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `body`, recording any failure or panic as the thread's last error.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> DecorStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            DecorStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            DecorStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| Failure(DecorStatus::InvalidUtf8, format!("`{what}`: {e}")))
}

unsafe fn graph_ref<'a>(graph: *const DecorGraph) -> Result<&'a FactorGraph, Failure> {
    graph.as_ref().map(|g| &g.graph).ok_or_else(|| null("graph"))
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    let c = CString::new(text).map_err(|e| Failure(DecorStatus::InvalidInput, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Parses a graph from NUL-terminated JSON. On success `*out` owns a handle
/// to release with `decor_graph_free`.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn decor_graph_from_json(json: *const c_char, out: *mut *mut DecorGraph) -> DecorStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let graph = FactorGraph::from_json_str(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(DecorGraph { graph }));
        Ok(())
    })
}

/// Releases a graph handle. Null is ignored.
///
/// # Safety
/// `graph` must come from `decor_graph_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn decor_graph_free(graph: *mut DecorGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of variables in the graph.
///
/// # Safety
/// `graph` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn decor_graph_variable_count(graph: *const DecorGraph, out: *mut usize) -> DecorStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = g.variables().len();
        Ok(())
    })
}

/// Runs the detector on the named factor and writes
/// `{"factor": ..., "subsets": [[arg names], ...]}` to `*out_json`, largest
/// subsets first. `timeout_ms == 0` means no deadline.
///
/// # Safety
/// `graph`, `factor` and `out_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn decor_detect(
    graph: *const DecorGraph,
    factor: *const c_char,
    timeout_ms: u64,
    out_json: *mut *mut c_char,
) -> DecorStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        *out_json = ptr::null_mut();
        let g = graph_ref(graph)?;
        let name = read_str(factor, "factor")?;
        let f = g.factor(name).ok_or_else(|| Error::UnknownFactor(name.to_string()))?;
        let deadline = Deadline::from_millis((timeout_ms > 0).then_some(timeout_ms));
        let outcome = decor_with_deadline(f, deadline).map_err(|e| Failure(DecorStatus::Timeout, e.to_string()))?;
        let subsets: Vec<Vec<&str>> = outcome
            .candidates
            .sorted()
            .into_iter()
            .map(|s| s.positions().into_iter().map(|p| f.args()[p].name()).collect())
            .collect();
        let json = serde_json::json!({ "factor": f.name(), "subsets": subsets });
        write_string(out_json, json.to_string())
    })
}

/// Checks whether the named factor is commutative in the given zero-based
/// argument positions.
///
/// # Safety
/// `positions` must point to `len` readable values (or be null when `len`
/// is 0); the other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn decor_is_commutative(
    graph: *const DecorGraph,
    factor: *const c_char,
    positions: *const usize,
    len: usize,
    out: *mut bool,
) -> DecorStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let g = graph_ref(graph)?;
        let name = read_str(factor, "factor")?;
        let f = g.factor(name).ok_or_else(|| Error::UnknownFactor(name.to_string()))?;
        let subset: &[usize] = match (positions.is_null(), len) {
            (_, 0) => &[],
            (true, _) => return Err(null("positions")),
            (false, _) => std::slice::from_raw_parts(positions, len),
        };
        *out = is_commutative(f, subset)?;
        Ok(())
    })
}

/// Groups variables and factors by colour passing, using the evidence stored
/// in the graph, and writes the grouping JSON to `*out_json`.
///
/// # Safety
/// `graph` and `out_json` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn decor_lift(graph: *const DecorGraph, out_json: *mut *mut c_char) -> DecorStatus {
    guard(|| {
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        *out_json = ptr::null_mut();
        let g = graph_ref(graph)?;
        let grouping = run_cpr(g, &Evidence::from_graph(g))?;
        write_string(out_json, grouping.to_json_string()?)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn decor_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn decor_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
