//! C interface to `thindex`.
//!
//! Problems are parsed from the same JSON the command line reads and live
//! behind an opaque handle. Every call returns a [`ThxStatus`]; on anything
//! other than success, `thx_last_error` describes what went wrong on the
//! calling thread. Strings handed out must be released with
//! `thx_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use thindex::algebra::{is_fredholm, FredholmVerdict, Fredholmness};
use thindex::arcs::{mu, nu, CompactReal, Exponent};
use thindex::cli;
use thindex::config::ProblemConfig;
use thindex::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThxStatus {
    Ok = 0,
    NotFredholm = 1,
    Unresolved = 2,
    InvalidInput = 3,
    NullPointer = 4,
    Internal = 5,
}

/// Invertibility scan result. `fredholm` is 0 (yes), 1 (no) or 2 (undecided).
/// Infinite `lambda` is reported as an IEEE infinity.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThxVerdict {
    pub fredholm: i32,
    pub min_abs_det: f64,
    pub max_abs_det: f64,
    pub witness_t_angle: f64,
    pub witness_lambda: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThxIndexReport {
    pub verdict: ThxVerdict,
    /// Nonzero when `index` and `winding` are meaningful.
    pub has_index: i32,
    pub winding: i64,
    pub index: i64,
}

/// Opaque parsed problem.
pub struct ThxProblem {
    cfg: ProblemConfig,
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

fn status_of(e: &Error) -> ThxStatus {
    match cli::exit_code(e) {
        cli::EXIT_NOT_FREDHOLM => ThxStatus::NotFredholm,
        cli::EXIT_INPUT => ThxStatus::InvalidInput,
        _ => ThxStatus::Unresolved,
    }
}

/// Runs `f`, turning errors and panics into a status plus the last error.
fn guard<F: FnOnce() -> Result<(), (ThxStatus, String)>>(f: F) -> ThxStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ThxStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ThxStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (ThxStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (ThxStatus, String) {
    (ThxStatus::NullPointer, format!("{what} is null"))
}

fn lambda_value(l: CompactReal) -> f64 {
    match l {
        CompactReal::NegInf => f64::NEG_INFINITY,
        CompactReal::PosInf => f64::INFINITY,
        CompactReal::Finite(x) => x,
    }
}

fn verdict_of(v: &FredholmVerdict) -> ThxVerdict {
    ThxVerdict {
        fredholm: match v.status {
            Fredholmness::Yes => 0,
            Fredholmness::No => 1,
            Fredholmness::Unresolved => 2,
        },
        min_abs_det: v.min_abs_det,
        max_abs_det: v.max_abs_det,
        witness_t_angle: v.witness.0,
        witness_lambda: lambda_value(v.witness.1),
    }
}

unsafe fn problem<'a>(h: *const ThxProblem) -> Result<&'a ThxProblem, (ThxStatus, String)> {
    h.as_ref().ok_or_else(|| null("problem"))
}

fn hand_out(s: String, out: *mut *mut c_char) -> Result<(), (ThxStatus, String)> {
    let c = CString::new(s).map_err(|e| (ThxStatus::Internal, e.to_string()))?;
    // SAFETY: callers check `out` for null before handing it here
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Parses a NUL-terminated JSON problem. On success `*out` owns a handle to
/// be released with `thx_problem_free`.
///
/// # Safety
/// `json` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thx_problem_parse(
    json: *const c_char,
    out: *mut *mut ThxProblem,
) -> ThxStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (ThxStatus::InvalidInput, format!("config is not UTF-8: {e}")))?;
        let cfg = ProblemConfig::parse(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(ThxProblem { cfg }));
        Ok(())
    })
}

/// Releases a handle from `thx_problem_parse`. Null is ignored.
///
/// # Safety
/// `h` must come from `thx_problem_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn thx_problem_free(h: *mut ThxProblem) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Replaces the exponent `p`.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn thx_problem_set_p(h: *mut ThxProblem, p: f64) -> ThxStatus {
    guard(|| {
        let prob = h.as_mut().ok_or_else(|| null("problem"))?;
        prob.cfg.exp = Exponent::new(p).map_err(lib_err)?;
        Ok(())
    })
}

/// Replaces the sampling resolution; values below 2 are raised to 2.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn thx_problem_set_grid(
    h: *mut ThxProblem,
    t_points: usize,
    lambda_points: usize,
) -> ThxStatus {
    guard(|| {
        let prob = h.as_mut().ok_or_else(|| null("problem"))?;
        prob.cfg.res.t_points = t_points.max(2);
        prob.cfg.res.lambda_points = lambda_points.max(2);
        Ok(())
    })
}

/// Fredholm verdict of the problem's operator.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thx_check(h: *const ThxProblem, out: *mut ThxVerdict) -> ThxStatus {
    guard(|| {
        let prob = problem(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let cfg = &prob.cfg;
        *out = verdict_of(&is_fredholm(&cfg.expr, cfg.exp, cfg.res));
        Ok(())
    })
}

/// Verdict and index. With `doubled` nonzero the expression must be a single
/// generator and the index is that of its doubled matrix operator. A
/// non-Fredholm operator is not an error: `has_index` is 0.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thx_index(
    h: *const ThxProblem,
    doubled: i32,
    out: *mut ThxIndexReport,
) -> ThxStatus {
    guard(|| {
        let prob = problem(h)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (report, _) = cli::index_and_curve(&prob.cfg, doubled != 0).map_err(lib_err)?;
        *out = ThxIndexReport {
            verdict: verdict_of(&report.verdict),
            has_index: i32::from(report.index.is_some()),
            winding: report.winding.unwrap_or(0),
            index: report.index.unwrap_or(0),
        };
        Ok(())
    })
}

/// The index curve as CSV, same layout as the command line. Fails with
/// `NOT_FREDHOLM` when there is no curve.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thx_curve_csv(
    h: *const ThxProblem,
    doubled: i32,
    out: *mut *mut c_char,
) -> ThxStatus {
    guard(|| {
        let prob = problem(h)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let (csv, _) = cli::cmd_curve(&prob.cfg, doubled != 0).map_err(lib_err)?;
        hand_out(csv, out)
    })
}

/// The essential spectrum cloud as CSV.
///
/// # Safety
/// `h` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn thx_spectrum_csv(
    h: *const ThxProblem,
    out: *mut *mut c_char,
) -> ThxStatus {
    guard(|| {
        let prob = problem(h)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        hand_out(cli::cmd_spectrum(&prob.cfg).map_err(lib_err)?, out)
    })
}

/// Releases a string from this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn thx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn arc_fn(
    f: fn(Exponent, CompactReal) -> Complex64,
    p: f64,
    lambda: f64,
    re: *mut f64,
    im: *mut f64,
) -> ThxStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("output"));
        }
        if lambda.is_nan() {
            return Err((ThxStatus::InvalidInput, "lambda is NaN".into()));
        }
        let z = f(
            Exponent::new(p).map_err(lib_err)?,
            CompactReal::from(lambda),
        );
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// `mu_p(lambda) = (1 + coth(pi (lambda + i/p))) / 2`; infinities allowed.
///
/// # Safety
/// `re` and `im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn thx_mu(p: f64, lambda: f64, re: *mut f64, im: *mut f64) -> ThxStatus {
    arc_fn(mu, p, lambda, re, im)
}

/// `nu_p(lambda) = 1 / (2i sinh(pi (lambda + i/p)))`; infinities allowed.
///
/// # Safety
/// `re` and `im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn thx_nu(p: f64, lambda: f64, re: *mut f64, im: *mut f64) -> ThxStatus {
    arc_fn(nu, p, lambda, re, im)
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn thx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
