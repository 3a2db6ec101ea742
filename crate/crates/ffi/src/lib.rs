//! C interface to `trisbf`.
//!
//! Every function returns a [`TrisbfStatus`]. On failure the message is
//! kept per thread and can be copied out with
//! [`trisbf_last_error_message`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use trisbf::engine::Evaluator;
use trisbf::gridscan::{evaluate_grid_with, GridAxis, GridSpec};
use trisbf::hankelbowman::evaluate_hb_with;
use trisbf::oracle::quadrature_eval;
use trisbf::paramdiff::evaluate_weighted_with;
use trisbf::{Damping, Error, EvalResult, Method, RadiiTriple, WeightedIntegralSpec};

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrisbfStatus {
    Ok = 0,
    NullPointer = 1,
    /// Input violates a documented constraint.
    InvalidInput = 2,
    /// Reality, convergence or tolerance failure.
    Numerical = 3,
    /// Order, power or cost caps exceeded.
    LimitExceeded = 4,
    /// Output buffer too small.
    BufferTooSmall = 5,
    /// Internal panic, caught at the boundary.
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrisbfDamping {
    /// Weight exp(-p^2 k).
    Exp = 0,
    /// Weight exp(-(p k)^2).
    Gauss = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrisbfMethod {
    /// Nested sums for Gaussian odd or low powers, recursion otherwise.
    Auto = 0,
    Recursion = 1,
    HankelBowman = 2,
    Quadrature = 3,
}

/// `∫ k^n w(k) j_l1(k r1) j_l2(k r2) j_l3(k r3) dk`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrisbfSpec {
    pub ell: [i32; 3],
    pub r: [f64; 3],
    pub damping: TrisbfDamping,
    pub p: f64,
    pub n: u32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TrisbfResult {
    pub value: f64,
    pub im_residual: f64,
    pub error_estimate: f64,
    pub kernel_calls: u64,
    /// The method that produced the value.
    pub method: i32,
    /// Non-zero when the result carries quality flags.
    pub flagged: i32,
}

/// Opaque evaluation context holding the kernel caches.
pub struct TrisbfEvaluator {
    inner: Evaluator,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> TrisbfStatus {
    match e {
        Error::OrderLimit { .. } | Error::DerivativeOrderLimit { .. } | Error::CostLimit(_) => TrisbfStatus::LimitExceeded,
        e if e.is_numerical() => TrisbfStatus::Numerical,
        _ => TrisbfStatus::InvalidInput,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (TrisbfStatus, String)>) -> TrisbfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            TrisbfStatus::Ok
        }
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            TrisbfStatus::Internal
        }
    }
}

fn fail(e: Error) -> (TrisbfStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (TrisbfStatus, String) {
    (TrisbfStatus::NullPointer, format!("{what} is null"))
}

fn damping(kind: TrisbfDamping, p: f64) -> Damping {
    match kind {
        TrisbfDamping::Exp => Damping::Exp(p),
        TrisbfDamping::Gauss => Damping::Gauss(p),
    }
}

fn spec_of(s: &TrisbfSpec) -> WeightedIntegralSpec {
    WeightedIntegralSpec::new(s.ell, RadiiTriple::from_array(s.r), damping(s.damping, s.p), s.n)
}

fn method_code(m: Method) -> i32 {
    match m {
        Method::Recursion => TrisbfMethod::Recursion as i32,
        Method::HankelBowman => TrisbfMethod::HankelBowman as i32,
        Method::Quadrature => TrisbfMethod::Quadrature as i32,
        Method::BaseCase | Method::Grid => TrisbfMethod::Auto as i32,
    }
}

fn result_of(r: &EvalResult) -> TrisbfResult {
    TrisbfResult {
        value: r.value,
        im_residual: r.im_residual,
        error_estimate: r.error_estimate,
        kernel_calls: r.diagnostics.kernel_calls,
        method: method_code(r.method),
        flagged: r.is_flagged() as i32,
    }
}

/// New evaluator; free it with [`trisbf_evaluator_free`].
#[no_mangle]
pub extern "C" fn trisbf_evaluator_new() -> *mut TrisbfEvaluator {
    catch_unwind(|| Box::into_raw(Box::new(TrisbfEvaluator { inner: Evaluator::default() }))).unwrap_or(ptr::null_mut())
}

/// # Safety
/// `ev` must come from [`trisbf_evaluator_new`] and not be used again.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn trisbf_evaluator_free(ev: *mut TrisbfEvaluator) {
    if !ev.is_null() {
        drop(Box::from_raw(ev));
    }
}

/// Drops cached kernels.
///
/// # Safety
/// `ev` must be a live evaluator or null.
#[no_mangle]
pub unsafe extern "C" fn trisbf_evaluator_clear(ev: *mut TrisbfEvaluator) -> TrisbfStatus {
    guard(|| {
        let ev = ev.as_ref().ok_or_else(|| null("evaluator"))?;
        ev.inner.clear_caches();
        Ok(())
    })
}

/// Evaluates one integral. `ev` may be null to use a process-wide
/// evaluator. `tol` is only read for quadrature.
///
/// # Safety
/// `spec` and `out` must be valid pointers; `ev` live or null.
#[no_mangle]
pub unsafe extern "C" fn trisbf_eval(
    ev: *const TrisbfEvaluator,
    spec: *const TrisbfSpec,
    method: TrisbfMethod,
    tol: f64,
    out: *mut TrisbfResult,
) -> TrisbfStatus {
    guard(|| {
        let spec = spec.as_ref().ok_or_else(|| null("spec"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let evaluator = match ev.as_ref() {
            Some(e) => &e.inner,
            None => trisbf::engine::global(),
        };
        let s = spec_of(spec);
        let gauss_low = spec.damping == TrisbfDamping::Gauss && (spec.n < 2 || spec.n % 2 == 1);
        let res = match method {
            TrisbfMethod::Auto if gauss_low => evaluate_hb_with(evaluator, &s),
            TrisbfMethod::Auto | TrisbfMethod::Recursion => evaluate_weighted_with(evaluator, &s),
            TrisbfMethod::HankelBowman => evaluate_hb_with(evaluator, &s),
            TrisbfMethod::Quadrature => quadrature_eval(&s, tol).map(|q| EvalResult {
                value: q.value,
                method: Method::Quadrature,
                im_residual: 0.0,
                error_estimate: q.error_estimate,
                diagnostics: Default::default(),
            }),
        }
        .map_err(fail)?;
        *out = result_of(&res);
        Ok(())
    })
}

/// Evaluates over a regular grid, `axes` holding (start, stop, count)
/// per radius with counts as doubles. Values are written row-major with
/// `r1` outermost; `len` must be at least the product of the counts.
/// `threads` of zero uses the default pool.
///
/// # Safety
/// `ev` live or null; `axes` points to 9 doubles; `values` to `len`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn trisbf_grid(
    ev: *const TrisbfEvaluator,
    axes: *const f64,
    ell: *const i32,
    damping_kind: TrisbfDamping,
    p: f64,
    n: u32,
    threads: u32,
    values: *mut f64,
    len: usize,
) -> TrisbfStatus {
    guard(|| {
        if axes.is_null() {
            return Err(null("axes"));
        }
        if ell.is_null() {
            return Err(null("ell"));
        }
        let a = std::slice::from_raw_parts(axes, 9);
        let l = std::slice::from_raw_parts(ell, 3);
        let mut ax = [GridAxis::new(0.0, 0.0, 0); 3];
        for (i, slot) in ax.iter_mut().enumerate() {
            let c = a[3 * i + 2];
            if !(c >= 1.0 && c.fract() == 0.0 && c <= 1e7) {
                return Err((TrisbfStatus::InvalidInput, format!("axis {} count {c} is not a positive integer", i + 1)));
            }
            *slot = GridAxis::new(a[3 * i], a[3 * i + 1], c as usize);
        }
        let g = GridSpec::new(ax, [l[0], l[1], l[2]], damping(damping_kind, p), n);
        g.validate().map_err(fail)?;
        if values.is_null() {
            return Err(null("values"));
        }
        if len < g.len() {
            return Err((TrisbfStatus::BufferTooSmall, format!("buffer holds {len} values, grid needs {}", g.len())));
        }
        let fresh;
        let evaluator = match ev.as_ref() {
            Some(e) => &e.inner,
            None => {
                fresh = Evaluator::default();
                &fresh
            }
        };
        let t = (threads > 0).then_some(threads as usize);
        let res = evaluate_grid_with(evaluator, &g, t).map_err(fail)?;
        std::slice::from_raw_parts_mut(values, res.values.len()).copy_from_slice(&res.values);
        Ok(())
    })
}

/// Copies the calling thread's last error message into `buf` as a
/// NUL-terminated string, truncating to fit. Returns the full message
/// length excluding the terminator.
///
/// # Safety
/// `buf` must hold `len` bytes, or be null with `len` zero.
#[no_mangle]
pub unsafe extern "C" fn trisbf_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn trisbf_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    V.as_ptr()
}
