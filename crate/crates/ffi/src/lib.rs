//! C ABI for `convexflow`.
//!
//! Curves are opaque `CfCurve` handles owned by the caller and released with
//! `cf_curve_free`. Every fallible function returns a `CfStatus`; on failure
//! `cf_last_error` describes the cause. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use convexflow::flows::{run, FlowSpec, StepControl, Termination};
use convexflow::geometry::summarize;
use convexflow::inequalities;
use convexflow::io::{curve_from_json, curve_to_json};
use convexflow::mixed::{self, Relation};
use convexflow::{random_convex, Error, FourierSupport};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotConvex = 3,
    Domain = 4,
    Parse = 5,
    Numeric = 6,
    Io = 7,
    Panic = 8,
}

/// Opaque curve handle.
pub struct CfCurve(FourierSupport);

/// Geometric summary of a curve; `entropy` is meaningful only when
/// `has_entropy` is non-zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CfSummary {
    pub length: f64,
    pub area: f64,
    pub ipd: f64,
    pub ipr: f64,
    pub entropy: f64,
    pub has_entropy: bool,
    pub int_inv_k: f64,
    pub center_x: f64,
    pub center_y: f64,
    pub margin: f64,
}

/// Step-size and stopping parameters; fill with `cf_step_control_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CfStepControl {
    pub dt_init: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub safety: f64,
    pub t_max: f64,
    pub ipr_tol: f64,
    pub margin_floor: f64,
    pub local_tol: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfTermination {
    Converged = 0,
    TimeExhausted = 1,
    ConvexityLost = 2,
    NumericFailure = 3,
}

/// Outcome of `cf_flow_run`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CfFlowResult {
    pub termination: CfTermination,
    pub final_time: f64,
    /// Accepted steps.
    pub steps: usize,
    /// Angle of the convexity loss when `termination` is `ConvexityLost`.
    pub theta: f64,
    pub initial_ipd: f64,
    pub final_ipd: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfRelationKind {
    Homothetic = 0,
    Parallel = 1,
    Neither = 2,
}

/// Pair relation; `lambda` is set for homothetic pairs, `r` for parallel ones.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CfRelation {
    pub kind: CfRelationKind,
    pub lambda: f64,
    pub r: f64,
    pub shift_x: f64,
    pub shift_y: f64,
}

/// Mixed-area data of two curves.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct CfMixedReport {
    pub a12: f64,
    pub mixed_ipd: f64,
    pub mixed_ipr: f64,
    pub favard_lo: f64,
    pub favard_hi: f64,
    pub minkowski_slack: f64,
    pub sum_identity_residual: f64,
    pub lower_equality: bool,
    pub upper_equality: bool,
    pub relation: CfRelation,
}

/// One inequality check; `slack >= 0` means the inequality holds.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct CfInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub equality: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

struct Failure(CfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidCoefficients(_) | Error::GridTooCoarse { .. } => CfStatus::InvalidArgument,
            Error::NotConvex { .. } => CfStatus::NotConvex,
            Error::Domain(_) => CfStatus::Domain,
            Error::NonFinite(_) | Error::Flow(_) => CfStatus::Numeric,
            Error::Parse(_) => CfStatus::Parse,
            Error::Io(_) => CfStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CfStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(CfStatus::InvalidArgument, msg.into())
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            CfStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            CfStatus::Panic
        }
    }
}

unsafe fn curve_ref<'a>(curve: *const CfCurve, what: &str) -> Result<&'a FourierSupport, Failure> {
    curve.as_ref().map(|c| &c.0).ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(out: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    out.as_mut().ok_or_else(|| null(what))
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

fn into_handle(fs: FourierSupport) -> *mut CfCurve {
    Box::into_raw(Box::new(CfCurve(fs)))
}

/// Message describing the last failure on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a curve from `order + 1` cosine and sine coefficients
/// (`u = a[0]/2 + Σ a[n] cos nθ + b[n] sin nθ`, `b[0] = 0`).
///
/// # Safety
/// `a` and `b` must point to `order + 1` readable doubles; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_new(
    a: *const f64,
    b: *const f64,
    order: usize,
    out: *mut *mut CfCurve,
) -> CfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if a.is_null() || b.is_null() {
            return Err(null("coefficient array"));
        }
        let len = order.checked_add(1).ok_or_else(|| invalid("order too large"))?;
        let (a, b) = (slice::from_raw_parts(a, len), slice::from_raw_parts(b, len));
        *out = into_handle(FourierSupport::new(a.to_vec(), b.to_vec())?);
        Ok(())
    })
}

/// Seeded random strictly convex curve with radius of curvature at least
/// `margin_floor`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_random(
    seed: u64,
    order: usize,
    decay: f64,
    margin_floor: f64,
    out: *mut *mut CfCurve,
) -> CfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = into_handle(random_convex(seed, order, decay, margin_floor)?);
        Ok(())
    })
}

/// Parses the curve JSON format `{"order":N,"a":[...],"b":[...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_from_json(json: *const c_char, out: *mut *mut CfCurve) -> CfStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = into_handle(curve_from_json(c_str(json, "json")?)?);
        Ok(())
    })
}

/// Serialises a curve; release the string with `cf_string_free`.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_to_json(curve: *const CfCurve, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let fs = curve_ref(curve, "curve")?;
        let out = out_ref(out, "out")?;
        let text = CString::new(curve_to_json(fs)).map_err(|e| invalid(e.to_string()))?;
        *out = text.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a curve; null is ignored.
///
/// # Safety
/// `curve` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_free(curve: *mut CfCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Highest harmonic stored in the curve.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_order(curve: *const CfCurve, out: *mut usize) -> CfStatus {
    guard(|| {
        *out_ref(out, "out")? = curve_ref(curve, "curve")?.order();
        Ok(())
    })
}

/// Copies the coefficients into `a` and `b`, each of length `len`; `len`
/// must be at least `order + 1` and extra entries are zeroed.
///
/// # Safety
/// `curve` must be a live handle; `a` and `b` must point to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_coefficients(
    curve: *const CfCurve,
    a: *mut f64,
    b: *mut f64,
    len: usize,
) -> CfStatus {
    guard(|| {
        let fs = curve_ref(curve, "curve")?;
        if a.is_null() || b.is_null() {
            return Err(null("coefficient array"));
        }
        if len < fs.order() + 1 {
            return Err(invalid(format!("need {} coefficients, buffer holds {len}", fs.order() + 1)));
        }
        let (a, b) = (slice::from_raw_parts_mut(a, len), slice::from_raw_parts_mut(b, len));
        for n in 0..len {
            a[n] = fs.a(n);
            b[n] = fs.b(n);
        }
        Ok(())
    })
}

/// Length, area, isoperimetric quantities, entropy and centre.
///
/// # Safety
/// `curve` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_curve_summary(curve: *const CfCurve, out: *mut CfSummary) -> CfStatus {
    guard(|| {
        let s = summarize(curve_ref(curve, "curve")?);
        *out_ref(out, "out")? = CfSummary {
            length: s.length,
            area: s.area,
            ipd: s.ipd,
            ipr: s.ipr,
            entropy: s.entropy.unwrap_or(f64::NAN),
            has_entropy: s.entropy.is_some(),
            int_inv_k: s.int_inv_k,
            center_x: s.center[0],
            center_y: s.center[1],
            margin: s.margin,
        };
        Ok(())
    })
}

/// Writes the default step control into `out`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_step_control_default(out: *mut CfStepControl) -> CfStatus {
    guard(|| {
        let d = StepControl::default();
        *out_ref(out, "out")? = CfStepControl {
            dt_init: d.dt_init,
            dt_min: d.dt_min,
            dt_max: d.dt_max,
            safety: d.safety,
            t_max: d.t_max,
            ipr_tol: d.ipr_tol,
            margin_floor: d.margin_floor,
            local_tol: d.local_tol,
        };
        Ok(())
    })
}

/// Evolves `curve` under the named family (`csf`, `unit`, `gage`,
/// `jiangpan`, `mazhu`, `panyang`, `macheng`, `dual`, `gradipd`, `gradipr`,
/// `s1` … `s4`). `control` may be null for defaults. The final curve is
/// stored in `final_curve` when that pointer is non-null.
///
/// # Safety
/// `curve` must be a live handle, `family` a NUL-terminated string,
/// `control` null or readable, `result` writable, `final_curve` null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cf_flow_run(
    curve: *const CfCurve,
    family: *const c_char,
    control: *const CfStepControl,
    result: *mut CfFlowResult,
    final_curve: *mut *mut CfCurve,
) -> CfStatus {
    guard(|| {
        let fs = curve_ref(curve, "curve")?;
        let name = c_str(family, "family")?;
        let result = out_ref(result, "result")?;
        let spec = FlowSpec::from_name(name).ok_or_else(|| invalid(format!("unknown family {name:?}")))?;
        let mut sc = StepControl {
            snapshot_every: 0,
            ..StepControl::default()
        };
        if let Some(c) = control.as_ref() {
            sc.dt_init = c.dt_init;
            sc.dt_min = c.dt_min;
            sc.dt_max = c.dt_max;
            sc.safety = c.safety;
            sc.t_max = c.t_max;
            sc.ipr_tol = c.ipr_tol;
            sc.margin_floor = c.margin_floor;
            sc.local_tol = c.local_tol;
        }
        let trace = run(&spec, fs, &sc)?;
        let (termination, theta) = match trace.termination {
            Termination::Converged => (CfTermination::Converged, f64::NAN),
            Termination::TimeExhausted => (CfTermination::TimeExhausted, f64::NAN),
            Termination::ConvexityLost { theta, .. } => (CfTermination::ConvexityLost, theta),
            Termination::NumericFailure { .. } => (CfTermination::NumericFailure, f64::NAN),
        };
        *result = CfFlowResult {
            termination,
            final_time: trace.final_time(),
            steps: trace.records.len() - 1,
            theta,
            initial_ipd: trace.records[0].summary.ipd,
            final_ipd: trace.records[trace.records.len() - 1].summary.ipd,
        };
        if let Some(slot) = final_curve.as_mut() {
            *slot = into_handle(trace.final_curve().clone());
        }
        Ok(())
    })
}

/// Mixed area of two strictly convex curves.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_mixed_area(c1: *const CfCurve, c2: *const CfCurve, out: *mut f64) -> CfStatus {
    guard(|| {
        *out_ref(out, "out")? = mixed::mixed_area(curve_ref(c1, "c1")?, curve_ref(c2, "c2")?)?;
        Ok(())
    })
}

fn relation(r: &Relation) -> CfRelation {
    let none = CfRelation {
        kind: CfRelationKind::Neither,
        lambda: f64::NAN,
        r: f64::NAN,
        shift_x: f64::NAN,
        shift_y: f64::NAN,
    };
    match *r {
        Relation::Homothetic { lambda, shift } => CfRelation {
            kind: CfRelationKind::Homothetic,
            lambda,
            shift_x: shift[0],
            shift_y: shift[1],
            ..none
        },
        Relation::Parallel { r, shift } => CfRelation {
            kind: CfRelationKind::Parallel,
            r,
            shift_x: shift[0],
            shift_y: shift[1],
            ..none
        },
        Relation::Neither => none,
    }
}

/// Mixed area, Favard and Minkowski data and the pair relation.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cf_mixed_report(
    c1: *const CfCurve,
    c2: *const CfCurve,
    tol: f64,
    out: *mut CfMixedReport,
) -> CfStatus {
    guard(|| {
        let r = mixed::mixed_report(curve_ref(c1, "c1")?, curve_ref(c2, "c2")?, tol)?;
        *out_ref(out, "out")? = CfMixedReport {
            a12: r.a12,
            mixed_ipd: r.mixed_ipd,
            mixed_ipr: r.mixed_ipr,
            favard_lo: r.favard_lo,
            favard_hi: r.favard_hi,
            minkowski_slack: r.minkowski_slack,
            sum_identity_residual: r.sum_identity_residual,
            lower_equality: r.lower_equality,
            upper_equality: r.upper_equality,
            relation: relation(&r.relation),
        };
        Ok(())
    })
}

/// Runs one named inequality check (`gage`, `pan_yang`,
/// `refined_pan_yang`, `isoperimetric`, `entropy`, `andrews`, `poincare`).
///
/// # Safety
/// `curve` must be a live handle, `name` a NUL-terminated string and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn cf_check(
    curve: *const CfCurve,
    name: *const c_char,
    tol: f64,
    out: *mut CfInequality,
) -> CfStatus {
    guard(|| {
        let fs = curve_ref(curve, "curve")?;
        let name = c_str(name, "name")?;
        if !inequalities::CHECK_NAMES.contains(&name) {
            return Err(invalid(format!("unknown check {name:?}")));
        }
        let r = inequalities::run_check(name, fs, tol)?;
        *out_ref(out, "out")? = CfInequality {
            lhs: r.lhs,
            rhs: r.rhs,
            slack: r.slack,
            holds: r.holds,
            equality: r.equality,
        };
        Ok(())
    })
}
