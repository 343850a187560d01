//! C ABI over the `qsieve` library.
//!
//! Every fallible function returns a [`QsStatus`] and writes its result
//! through out-pointers. On failure a message is kept per thread and can be
//! read with [`qs_last_error`]. Objects with internal structure are handed
//! out as opaque handles and must be released with the matching `_free`
//! function; strings returned through `char **` are released with
//! [`qs_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qsieve::case412::{self, ChainConfig, DeductionStep, StepStatus};
use qsieve::exactmath::{self, MathError};
use qsieve::obstruction::{self, Verdict};
use qsieve::params::{self, GqOrder};
use qsieve::scan::{self, ScanRow};
use qsieve::witness::{self, IncidenceModel};
use qsieve::{autlaws, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsStatus {
    Ok = 0,
    /// A parameter is out of range (zero order, index past the end, ...).
    InvalidArgument = 1,
    /// A mathematical hypothesis of the called law does not hold.
    Precondition = 2,
    /// An intermediate value does not fit in 64 bits.
    Overflow = 3,
    NullPointer = 4,
    /// Malformed text input.
    Parse = 5,
    Io = 6,
    /// A panic was caught or an invariant broke.
    Internal = 7,
}

/// Transitivity verdict codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsVerdict {
    NoConstraint = 0,
    NotPointTransitive = 1,
    NotLineTransitive = 2,
}

/// Deduction step status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsStepStatus {
    Verified = 0,
    Failed = 1,
    Axiom = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QsBasicLaws {
    pub point_count: u64,
    pub line_count: u64,
    pub divisibility_ok: bool,
    pub higman_ok: bool,
    pub interval_ok: bool,
    pub feasible: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QsInequality {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QsScanRow {
    pub s: u64,
    pub t: u64,
    /// Family parameter, meaningful only when `has_family` is set.
    pub n: u64,
    pub has_family: bool,
    pub lhs: u64,
    pub rhs: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QsStats {
    pub alpha0: u64,
    pub alpha1: u64,
    pub alpha2: u64,
    pub beta0: u64,
    pub beta1: u64,
    pub beta2: u64,
}

/// Rows of a completed scan.
pub struct QsScan {
    rows: Vec<ScanRow>,
}

/// Steps of the (4, 12) deduction.
pub struct QsChain {
    steps: Vec<DeductionStep>,
}

/// An explicit incidence model.
pub struct QsModel {
    model: IncidenceModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QsStatus {
    match err {
        Error::Math(MathError::Overflow) => QsStatus::Overflow,
        Error::Math(_) | Error::InvalidOrder { .. } | Error::Witness(_) => {
            QsStatus::InvalidArgument
        }
        Error::Precondition(_) => QsStatus::Precondition,
        Error::GoldenParse { .. } | Error::RowParse { .. } | Error::Json(_) => QsStatus::Parse,
        Error::Io(_) => QsStatus::Io,
    }
}

struct Fail(QsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type FfiResult = Result<(), Fail>;

fn guard<F: FnOnce() -> FfiResult>(f: F) -> QsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QsStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QsStatus::Internal
        }
    }
}

fn null() -> Fail {
    Fail(QsStatus::NullPointer, "null pointer argument".into())
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(QsStatus::InvalidArgument, msg.into())
}

unsafe fn write<T>(out: *mut T, v: T) -> FfiResult {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn borrow<'a, T>(h: *const T) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(null)
}

fn order(s: u64, t: u64) -> Result<GqOrder, Fail> {
    Ok(GqOrder::new(s, t)?)
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(s).map_err(|_| Fail(QsStatus::Internal, "embedded NUL".into()))?;
    out.write(c.into_raw());
    Ok(())
}

unsafe fn write_handle<T>(out: *mut *mut T, v: T) -> FfiResult {
    if out.is_null() {
        return Err(null());
    }
    out.write(Box::into_raw(Box::new(v)));
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_is_prime(n: u64, out: *mut bool) -> QsStatus {
    guard(|| write(out, exactmath::is_prime(n)))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_ceil_div(a: u64, b: u64, out: *mut u64) -> QsStatus {
    guard(|| write(out, exactmath::ceil_div(a, b).map_err(Error::from)?))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_basic_laws(s: u64, t: u64, out: *mut QsBasicLaws) -> QsStatus {
    guard(|| {
        let r = params::basic_laws(order(s, t)?)?;
        write(
            out,
            QsBasicLaws {
                point_count: r.point_count,
                line_count: r.line_count,
                divisibility_ok: r.divisibility_ok,
                higman_ok: r.higman_ok,
                interval_ok: r.interval_ok,
                feasible: r.feasible,
            },
        )
    })
}

/// Both sides of the ceiling inequality. Fails with `Precondition` unless
/// the order is thick, `s > t` and `s + 1` is prime.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_main_inequality(s: u64, t: u64, out: *mut QsInequality) -> QsStatus {
    guard(|| {
        let i = obstruction::main_inequality(order(s, t)?)?;
        write(
            out,
            QsInequality {
                lhs: i.lhs,
                rhs: i.rhs,
                holds: i.holds,
            },
        )
    })
}

fn verdict_code(v: Verdict) -> QsVerdict {
    match v {
        Verdict::NoConstraint => QsVerdict::NoConstraint,
        Verdict::NotPointTransitive => QsVerdict::NotPointTransitive,
        Verdict::NotLineTransitive => QsVerdict::NotLineTransitive,
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_point_verdict(s: u64, t: u64, out: *mut QsVerdict) -> QsStatus {
    guard(|| {
        let r = obstruction::check_point_transitivity(order(s, t)?)?;
        write(out, verdict_code(r.verdict))
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_line_verdict(s: u64, t: u64, out: *mut QsVerdict) -> QsStatus {
    guard(|| {
        let r = obstruction::check_line_transitivity(order(s, t)?)?;
        write(out, verdict_code(r.verdict))
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_benson_residue(
    s: u64,
    t: u64,
    alpha0: u64,
    alpha1: u64,
    out: *mut bool,
) -> QsStatus {
    guard(|| write(out, autlaws::benson_residue(order(s, t)?, alpha0, alpha1)))
}

/// Bit mask of admissible fixed-substructure types for an automorphism of
/// prime order `p`: bit 0 for T0, then T1, T1d, T2, T2d, T3, T3d, T4.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_type_admissible(s: u64, t: u64, p: u64, out: *mut u32) -> QsStatus {
    guard(|| write(out, autlaws::type_admissible(order(s, t)?, p)?.mask()))
}

/// Runs the scan for `2 <= t <= t_max`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_scan_new(t_max: u64, out: *mut *mut QsScan) -> QsStatus {
    guard(|| {
        if t_max < 2 {
            return Err(invalid("t_max must be at least 2"));
        }
        write_handle(
            out,
            QsScan {
                rows: scan::scan(t_max)?,
            },
        )
    })
}

/// # Safety
/// `h` must be a live scan handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_scan_len(h: *const QsScan, out: *mut usize) -> QsStatus {
    guard(|| write(out, borrow(h)?.rows.len()))
}

/// # Safety
/// `h` must be a live scan handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_scan_row(
    h: *const QsScan,
    index: usize,
    out: *mut QsScanRow,
) -> QsStatus {
    guard(|| {
        let rows = &borrow(h)?.rows;
        let r = rows
            .get(index)
            .ok_or_else(|| invalid(format!("row {index} out of range 0..{}", rows.len())))?;
        write(
            out,
            QsScanRow {
                s: r.s,
                t: r.t,
                n: r.family.unwrap_or(0),
                has_family: r.family.is_some(),
                lhs: r.lhs,
                rhs: r.rhs,
            },
        )
    })
}

/// CSV rendering of the scan; free with [`qs_string_free`].
///
/// # Safety
/// `h` must be a live scan handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_scan_to_csv(h: *const QsScan, out: *mut *mut c_char) -> QsStatus {
    guard(|| write_string(out, scan::to_csv(&borrow(h)?.rows)))
}

/// # Safety
/// `h` must be NULL or a live scan handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qs_scan_free(h: *mut QsScan) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Runs the (4, 12) deduction. `readmit` lists primes forced back into the
/// allowed set (fault injection); it may be NULL when `readmit_len` is 0.
///
/// # Safety
/// `readmit` must point to `readmit_len` values; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_chain_run(
    readmit: *const u64,
    readmit_len: usize,
    out: *mut *mut QsChain,
) -> QsStatus {
    guard(|| {
        let primes: &[u64] = if readmit_len == 0 {
            &[]
        } else if readmit.is_null() {
            return Err(null());
        } else {
            std::slice::from_raw_parts(readmit, readmit_len)
        };
        let config = ChainConfig {
            readmit: primes.iter().copied().collect(),
        };
        write_handle(
            out,
            QsChain {
                steps: case412::run_412_chain_with(&config)?,
            },
        )
    })
}

/// # Safety
/// `h` must be a live chain handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_chain_len(h: *const QsChain, out: *mut usize) -> QsStatus {
    guard(|| write(out, borrow(h)?.steps.len()))
}

/// # Safety
/// `h` must be a live chain handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_chain_step_status(
    h: *const QsChain,
    index: usize,
    out: *mut QsStepStatus,
) -> QsStatus {
    guard(|| {
        let steps = &borrow(h)?.steps;
        let step = steps
            .get(index)
            .ok_or_else(|| invalid(format!("step {index} out of range 0..{}", steps.len())))?;
        write(
            out,
            match step.status {
                StepStatus::Verified => QsStepStatus::Verified,
                StepStatus::Failed => QsStepStatus::Failed,
                StepStatus::Axiom => QsStepStatus::Axiom,
            },
        )
    })
}

/// Name of one step; free with [`qs_string_free`].
///
/// # Safety
/// `h` must be a live chain handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_chain_step_name(
    h: *const QsChain,
    index: usize,
    out: *mut *mut c_char,
) -> QsStatus {
    guard(|| {
        let steps = &borrow(h)?.steps;
        let step = steps
            .get(index)
            .ok_or_else(|| invalid(format!("step {index} out of range 0..{}", steps.len())))?;
        write_string(out, step.name.clone())
    })
}

/// The final `VERDICT: ...` line; free with [`qs_string_free`].
///
/// # Safety
/// `h` must be a live chain handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_chain_verdict(h: *const QsChain, out: *mut *mut c_char) -> QsStatus {
    guard(|| write_string(out, case412::verdict_line(&borrow(h)?.steps)))
}

/// # Safety
/// `h` must be a live chain handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_chain_to_json(h: *const QsChain, out: *mut *mut c_char) -> QsStatus {
    guard(|| write_string(out, case412::render_json(&borrow(h)?.steps)?))
}

/// # Safety
/// `h` must be NULL or a live chain handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qs_chain_free(h: *mut QsChain) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// The order-(2, 2) model on duads and synthemes.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_model_doily(out: *mut *mut QsModel) -> QsStatus {
    guard(|| {
        write_handle(
            out,
            QsModel {
                model: witness::build_doily()?,
            },
        )
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_model_grid(s: u64, out: *mut *mut QsModel) -> QsStatus {
    guard(|| {
        write_handle(
            out,
            QsModel {
                model: witness::build_grid(s)?,
            },
        )
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_model_dual_grid(t: u64, out: *mut *mut QsModel) -> QsStatus {
    guard(|| {
        write_handle(
            out,
            QsModel {
                model: witness::build_dual_grid(t)?,
            },
        )
    })
}

/// # Safety
/// `h` must be a live model handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_model_counts(
    h: *const QsModel,
    points: *mut usize,
    lines: *mut usize,
) -> QsStatus {
    guard(|| {
        let m = &borrow(h)?.model;
        write(points, m.point_count())?;
        write(lines, m.line_count())
    })
}

/// # Safety
/// `h` must be a live model handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_model_check_axioms(h: *const QsModel, out: *mut bool) -> QsStatus {
    guard(|| write(out, borrow(h)?.model.check_axioms()))
}

/// New model equal to `h` with the incidence of `point` and `line` toggled.
///
/// # Safety
/// `h` must be a live model handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_model_flip(
    h: *const QsModel,
    point: usize,
    line: usize,
    out: *mut *mut QsModel,
) -> QsStatus {
    guard(|| {
        let flipped = borrow(h)?
            .model
            .with_flipped_incidence(point, line)
            .map_err(Error::from)?;
        write_handle(out, QsModel { model: flipped })
    })
}

/// Census of the doily automorphism induced by a permutation of the six
/// symbols, given 0-based in `perm[0..6]`.
///
/// # Safety
/// `h` must be a live model handle, `perm` must point to 6 values and
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_model_symbol_stats(
    h: *const QsModel,
    perm: *const usize,
    out: *mut QsStats,
) -> QsStatus {
    guard(|| {
        let m = &borrow(h)?.model;
        if perm.is_null() {
            return Err(null());
        }
        let perm = std::slice::from_raw_parts(perm, 6).to_vec();
        let aut = witness::induced_automorphism(m, &witness::SymmetryElement::Symbols(perm))
            .map_err(Error::from)?;
        let st = witness::measure_stats(m, &aut);
        write(
            out,
            QsStats {
                alpha0: st.alpha0,
                alpha1: st.alpha1,
                alpha2: st.alpha2,
                beta0: st.beta0,
                beta1: st.beta1,
                beta2: st.beta2,
            },
        )
    })
}

/// Checks every law on every iterated automorphism of the model.
///
/// # Safety
/// `h` must be a live model handle; outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_model_verify_all(
    h: *const QsModel,
    total: *mut usize,
    passed: *mut usize,
) -> QsStatus {
    guard(|| {
        let summary = witness::verify_all(&borrow(h)?.model);
        write(total, summary.total)?;
        write(passed, summary.passed)
    })
}

/// JSON dump of the model; free with [`qs_string_free`].
///
/// # Safety
/// `h` must be a live model handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qs_model_to_json(h: *const QsModel, out: *mut *mut c_char) -> QsStatus {
    guard(|| write_string(out, borrow(h)?.model.to_json()?))
}

/// # Safety
/// `h` must be NULL or a live model handle, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qs_model_free(h: *mut QsModel) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Copies the last error into a Rust string; test helper for Rust callers.
pub fn last_error_string() -> Option<String> {
    let p = qs_last_error();
    if p.is_null() {
        None
    } else {
        // SAFETY: points into the thread-local CString set by this thread
        Some(unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
    }
}
