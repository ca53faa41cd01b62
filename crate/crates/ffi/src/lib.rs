//! C ABI over the `ellgraph` engine.
//!
//! Graphs and ring elements cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free`. Strings returned through
//! `char **` out-parameters are released with [`eg_string_free`]. Every
//! fallible call returns an [`EgStatus`]; on failure a message is available
//! from [`eg_last_error`] until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ellgraph::graph::{format as gformat, DecoratedGraph};
use ellgraph::integrator::{banana_closed_form, check_anomaly, Evaluator};
use ellgraph::oracle::oracle_evaluate_banana;
use ellgraph::qmodring::{format as rformat, loop_value, RingElement};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgFormat {
    Text = 0,
    Json = 1,
    Latex = 2,
}

/// Opaque decorated graph.
pub struct EgGraph(DecoratedGraph);

/// Opaque element of the ring of almost-holomorphic modular forms.
pub struct EgRing(RingElement);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(EgStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EgStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            EgStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(EgStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: caller passes a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|e| Fail(EgStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: checked non-null; caller owns the slot.
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|e| Fail(EgStatus::InvalidInput, e.to_string()))?;
    // SAFETY: checked non-null.
    unsafe { *out = c.into_raw() };
    Ok(())
}

unsafe fn graph_ref<'a>(g: *const EgGraph) -> Result<&'a DecoratedGraph, Fail> {
    // SAFETY: a non-null handle came from eg_graph_parse and is still live.
    unsafe { g.as_ref() }.map(|g| &g.0).ok_or_else(|| null("graph"))
}

unsafe fn ring_ref<'a>(r: *const EgRing) -> Result<&'a RingElement, Fail> {
    // SAFETY: a non-null handle came from this library and is still live.
    unsafe { r.as_ref() }.map(|r| &r.0).ok_or_else(|| null("ring element"))
}

/// Message of the last failed call on this thread, or NULL. Owned by the
/// library; valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn eg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn eg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a graph in the text format or, if it starts with `{`, JSON.
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eg_graph_parse(src: *const c_char, out: *mut *mut EgGraph) -> EgStatus {
    guard(|| {
        let s = unsafe { read_str(src, "src") }?;
        let g = gformat::parse_auto(s).map_err(|e| Fail(EgStatus::Parse, e.to_string()))?;
        unsafe { write_out(out, EgGraph(g), "out") }
    })
}

/// # Safety
/// `g` must be NULL or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn eg_graph_free(g: *mut EgGraph) {
    if !g.is_null() {
        // SAFETY: handle was created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Serializes a graph as JSON (`EG_FORMAT_JSON`) or text (other formats).
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eg_graph_to_string(g: *const EgGraph, format: EgFormat, out: *mut *mut c_char) -> EgStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        let s = match format {
            EgFormat::Json => gformat::to_json(g),
            _ => gformat::to_text(g),
        };
        unsafe { write_string(out, s) }
    })
}

/// Evaluates the regularized integral of a graph with decorations >= 0.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eg_graph_evaluate(g: *const EgGraph, out: *mut *mut EgRing) -> EgStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        if g.edges().iter().any(|e| e.dec < 0) {
            return Err(Fail(EgStatus::InvalidInput, "edge decorations must be >= 0".into()));
        }
        let value = Evaluator::default().evaluate(g);
        unsafe { write_out(out, EgRing(value), "out") }
    })
}

/// Checks `d_Y W(g) = W(delta g)`. `lhs` and `rhs` may be NULL if the two
/// sides are not wanted.
///
/// # Safety
/// `g` must be a live handle; `equal` must be writable; `lhs`, `rhs` NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn eg_graph_check_anomaly(
    g: *const EgGraph,
    equal: *mut bool,
    lhs: *mut *mut EgRing,
    rhs: *mut *mut EgRing,
) -> EgStatus {
    guard(|| {
        let g = unsafe { graph_ref(g) }?;
        if equal.is_null() {
            return Err(null("equal"));
        }
        let rep = check_anomaly(g).map_err(|e| Fail(EgStatus::InvalidInput, e.to_string()))?;
        // SAFETY: checked non-null.
        unsafe { *equal = rep.equal };
        if !lhs.is_null() {
            unsafe { write_out(lhs, EgRing(rep.lhs), "lhs") }?;
        }
        if !rhs.is_null() {
            unsafe { write_out(rhs, EgRing(rep.rhs), "rhs") }?;
        }
        Ok(())
    })
}

unsafe fn decorations<'a>(decs: *const u32, len: usize) -> Result<&'a [u32], Fail> {
    if len == 0 {
        return Err(Fail(EgStatus::InvalidInput, "a banana needs at least one edge".into()));
    }
    if decs.is_null() {
        return Err(null("decorations"));
    }
    // SAFETY: caller passes `len` readable values.
    Ok(unsafe { std::slice::from_raw_parts(decs, len) })
}

/// Value of the 2-vertex banana by the closed formula.
///
/// # Safety
/// `decs` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eg_banana_closed_form(decs: *const u32, len: usize, out: *mut *mut EgRing) -> EgStatus {
    guard(|| {
        let d = unsafe { decorations(decs, len) }?;
        let v = banana_closed_form(d).map_err(|e| Fail(EgStatus::InvalidInput, e.to_string()))?;
        unsafe { write_out(out, EgRing(v), "out") }
    })
}

/// Value of the 2-vertex banana by Laurent-series residues.
///
/// # Safety
/// `decs` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eg_banana_oracle(decs: *const u32, len: usize, out: *mut *mut EgRing) -> EgStatus {
    guard(|| {
        let d = unsafe { decorations(decs, len) }?;
        let v = oracle_evaluate_banana(d).map_err(|e| Fail(EgStatus::InvalidInput, e.to_string()))?;
        unsafe { write_out(out, EgRing(v), "out") }
    })
}

/// `W_k`, the value of a single loop of decoration `k >= 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eg_loop_value(k: i32, out: *mut *mut EgRing) -> EgStatus {
    guard(|| {
        if k < 0 {
            return Err(Fail(EgStatus::InvalidInput, format!("loop decoration {k} is negative")));
        }
        let v = loop_value(k).map_err(|e| Fail(EgStatus::InvalidInput, e.to_string()))?;
        unsafe { write_out(out, EgRing(v), "out") }
    })
}

/// Parses a ring element from text or JSON (LaTeX is output only).
///
/// # Safety
/// `src` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eg_ring_parse(src: *const c_char, format: EgFormat, out: *mut *mut EgRing) -> EgStatus {
    guard(|| {
        let s = unsafe { read_str(src, "src") }?;
        let parsed = match format {
            EgFormat::Text => rformat::parse_text(s),
            EgFormat::Json => rformat::parse_json(s),
            EgFormat::Latex => return Err(Fail(EgStatus::InvalidInput, "LaTeX cannot be parsed".into())),
        };
        let r = parsed.map_err(|e| Fail(EgStatus::Parse, e.to_string()))?;
        unsafe { write_out(out, EgRing(r), "out") }
    })
}

/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eg_ring_to_string(r: *const EgRing, format: EgFormat, out: *mut *mut c_char) -> EgStatus {
    guard(|| {
        let r = unsafe { ring_ref(r) }?;
        let s = match format {
            EgFormat::Text => rformat::to_text(r),
            EgFormat::Json => rformat::to_json(r),
            EgFormat::Latex => rformat::to_latex(r),
        };
        unsafe { write_string(out, s) }
    })
}

/// `d/dY`, acting as `(3/pi^2) d/dE2h`.
///
/// # Safety
/// `r` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eg_ring_partial_y(r: *const EgRing, out: *mut *mut EgRing) -> EgStatus {
    guard(|| {
        let r = unsafe { ring_ref(r) }?;
        let d = r.partial_y().map_err(|e| Fail(EgStatus::InvalidInput, e.to_string()))?;
        unsafe { write_out(out, EgRing(d), "out") }
    })
}

/// Exact equality; false if either handle is NULL.
///
/// # Safety
/// Handles must be NULL or live.
#[no_mangle]
pub unsafe extern "C" fn eg_ring_equal(a: *const EgRing, b: *const EgRing) -> bool {
    // SAFETY: non-null handles are live by contract.
    match unsafe { (a.as_ref(), b.as_ref()) } {
        (Some(a), Some(b)) => a.0 == b.0,
        _ => false,
    }
}

/// # Safety
/// `r` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn eg_ring_is_zero(r: *const EgRing) -> bool {
    // SAFETY: non-null handle is live by contract.
    unsafe { r.as_ref() }.is_some_and(|r| r.0.is_zero())
}

/// # Safety
/// `r` must be NULL or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn eg_ring_free(r: *mut EgRing) {
    if !r.is_null() {
        // SAFETY: handle was created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(r) });
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn eg_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: string was created by CString::into_raw in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}
