//! C interface to `padic-iter`.
//!
//! Maps and flows live behind opaque handles. Every fallible call returns a
//! [`PadicStatus`]; on failure the message is available from
//! [`padic_last_error`] until the next call on the same thread. Strings
//! returned through out-parameters are owned by the caller and released with
//! [`padic_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use padic_iter::padic::parse_padic;
use padic_iter::wire::{to_canonical_json, FlowJson, MapJson, PAdicJson};
use padic_iter::{
    check_hypothesis, eval_flow, eval_flow_symbolic, interpolate, AnalyticMap, Error, FlowValue,
    InterpolatedFlow, PAdicInt,
};

/// Status codes. The nonzero values match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PadicStatus {
    Ok = 0,
    /// Hypothesis failure, certificate violation or other mathematical refusal.
    MathError = 1,
    /// Malformed input, unknown prime, dimension mismatch.
    InputError = 2,
    /// Precision exhausted or degree cap exceeded.
    PrecisionError = 3,
    NullPointer = 4,
    /// A Rust panic was caught at the boundary.
    Internal = 5,
}

/// Opaque analytic map `Z_p^d -> Z_p^d`.
pub struct PadicMap {
    inner: AnalyticMap,
}

/// Opaque interpolated flow `g(x, n)`.
pub struct PadicFlow {
    inner: InterpolatedFlow,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> PadicStatus {
    match padic_iter::cli::exit_code(e) {
        1 => PadicStatus::MathError,
        3 => PadicStatus::PrecisionError,
        _ => PadicStatus::InputError,
    }
}

fn fail(status: PadicStatus, msg: impl Into<String>) -> PadicStatus {
    set_error(msg.into());
    status
}

fn guard<F: FnOnce() -> PadicStatus>(f: F) -> PadicStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PadicStatus::Internal, "panic inside padic-iter"),
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, PadicStatus> {
    if s.is_null() {
        return Err(fail(PadicStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(PadicStatus::InputError, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> PadicStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            PadicStatus::Ok
        }
        Err(_) => fail(PadicStatus::Internal, "output contains a NUL byte"),
    }
}

unsafe fn read_point(
    x0: *const *const c_char,
    len: usize,
    ctx: &padic_iter::PrimeContext,
) -> Result<Vec<PAdicInt>, PadicStatus> {
    if x0.is_null() && len > 0 {
        return Err(fail(PadicStatus::NullPointer, "x0 is null"));
    }
    (0..len)
        .map(|i| {
            let s = read_str(*x0.add(i), "x0 coordinate")?;
            parse_padic(ctx, s).map_err(|e| fail(status_of(&e), e.to_string()))
        })
        .collect()
}

fn value_json(v: &FlowValue, p: u64) -> String {
    let point: Vec<PAdicJson> = v.point.iter().map(PAdicJson::from).collect();
    to_canonical_json(&serde_json::json!({
        "p": p,
        "guaranteed_precision": v.guaranteed_precision,
        "point": point,
    }))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into this library.
#[no_mangle]
pub extern "C" fn padic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn padic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a map from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padic_map_from_json(json: *const c_char, out: *mut *mut PadicMap) -> PadicStatus {
    guard(|| {
        if out.is_null() {
            return fail(PadicStatus::NullPointer, "out is null");
        }
        let text = match read_str(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let j: MapJson = match serde_json::from_str(text) {
            Ok(j) => j,
            Err(e) => return fail(PadicStatus::InputError, format!("malformed map JSON: {e}")),
        };
        match AnalyticMap::try_from(&j) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PadicMap { inner }));
                PadicStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `map` must be null or a handle from [`padic_map_from_json`].
#[no_mangle]
pub unsafe extern "C" fn padic_map_free(map: *mut PadicMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// Dimension `d` of the map, 0 for null.
///
/// # Safety
/// `map` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn padic_map_dim(map: *const PadicMap) -> usize {
    map.as_ref().map_or(0, |m| m.inner.dim())
}

/// Contraction level `c` and whether `c > 1/(p-1)`. `c` is `UINT32_MAX`
/// for the identity map.
///
/// # Safety
/// `map` must be a live handle; `c` and `satisfied` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padic_map_check(
    map: *const PadicMap,
    c: *mut u32,
    satisfied: *mut bool,
) -> PadicStatus {
    guard(|| {
        let Some(m) = map.as_ref() else {
            return fail(PadicStatus::NullPointer, "map is null");
        };
        if c.is_null() || satisfied.is_null() {
            return fail(PadicStatus::NullPointer, "output pointer is null");
        }
        let h = check_hypothesis(&m.inner);
        *c = h.c.lower_bound().unwrap_or(u32::MAX);
        *satisfied = h.satisfied;
        PadicStatus::Ok
    })
}

/// Interpolate the iterates of `map` modulo `p^precision`.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padic_interpolate(
    map: *const PadicMap,
    precision: u32,
    out: *mut *mut PadicFlow,
) -> PadicStatus {
    guard(|| {
        let Some(m) = map.as_ref() else {
            return fail(PadicStatus::NullPointer, "map is null");
        };
        if out.is_null() {
            return fail(PadicStatus::NullPointer, "out is null");
        }
        match interpolate(&m.inner, precision) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(PadicFlow { inner }));
                PadicStatus::Ok
            }
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `flow` must be null or a handle from [`padic_interpolate`].
#[no_mangle]
pub unsafe extern "C" fn padic_flow_free(flow: *mut PadicFlow) {
    if !flow.is_null() {
        drop(Box::from_raw(flow));
    }
}

/// Guaranteed precision of the flow, 0 for null.
///
/// # Safety
/// `flow` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn padic_flow_precision(flow: *const PadicFlow) -> u32 {
    flow.as_ref().map_or(0, |f| f.inner.guaranteed_precision())
}

/// Canonical JSON of the flow, the same bytes `padic-iter interpolate` writes.
///
/// # Safety
/// `flow` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padic_flow_to_json(flow: *const PadicFlow, out: *mut *mut c_char) -> PadicStatus {
    guard(|| {
        let Some(f) = flow.as_ref() else {
            return fail(PadicStatus::NullPointer, "flow is null");
        };
        if out.is_null() {
            return fail(PadicStatus::NullPointer, "out is null");
        }
        write_string(out, to_canonical_json(&FlowJson::from(&f.inner)))
    })
}

/// Evaluate `g(x0, n)` from the symbolic flow. Coordinates and `n` are
/// integer or `a/b` literals. The result is JSON
/// `{"p", "guaranteed_precision", "point": [{"p","precision","residue"}]}`.
///
/// # Safety
/// `x0` must point to `len` NUL-terminated strings; `n` must be a
/// NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn padic_flow_eval(
    flow: *const PadicFlow,
    x0: *const *const c_char,
    len: usize,
    n: *const c_char,
    out: *mut *mut c_char,
) -> PadicStatus {
    guard(|| {
        let Some(f) = flow.as_ref() else {
            return fail(PadicStatus::NullPointer, "flow is null");
        };
        if out.is_null() {
            return fail(PadicStatus::NullPointer, "out is null");
        }
        let ctx = f.inner.ctx().clone();
        let point = match read_point(x0, len, &ctx) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let a = match read_str(n, "n").and_then(|s| {
            parse_padic(&ctx, s).map_err(|e| fail(status_of(&e), e.to_string()))
        }) {
            Ok(a) => a,
            Err(s) => return s,
        };
        match eval_flow_symbolic(&f.inner, &point, &a) {
            Ok(v) => write_string(out, value_json(&v, ctx.p())),
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Evaluate `f^n(x0)` modulo `p^precision` from the orbit of `x0`, without
/// building the symbolic flow. Same JSON output as [`padic_flow_eval`].
///
/// # Safety
/// As for [`padic_flow_eval`], with `map` a live handle.
#[no_mangle]
pub unsafe extern "C" fn padic_map_eval(
    map: *const PadicMap,
    x0: *const *const c_char,
    len: usize,
    n: *const c_char,
    precision: u32,
    out: *mut *mut c_char,
) -> PadicStatus {
    guard(|| {
        let Some(m) = map.as_ref() else {
            return fail(PadicStatus::NullPointer, "map is null");
        };
        if out.is_null() {
            return fail(PadicStatus::NullPointer, "out is null");
        }
        let ctx = match m.inner.ctx().with_precision(precision) {
            Ok(c) => c,
            Err(e) => return fail(status_of(&e), e.to_string()),
        };
        let point = match read_point(x0, len, &ctx) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let a = match read_str(n, "n").and_then(|s| {
            parse_padic(&ctx, s).map_err(|e| fail(status_of(&e), e.to_string()))
        }) {
            Ok(a) => a,
            Err(s) => return s,
        };
        match eval_flow(&m.inner, &point, &a, precision) {
            Ok(v) => write_string(out, value_json(&v, ctx.p())),
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}
