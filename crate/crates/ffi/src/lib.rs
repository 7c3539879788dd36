//! C ABI over `emi_core`.
//!
//! Values cross the boundary as opaque handles (`EmiReal`, `EmiMachin`) or as
//! NUL-terminated strings owned by this library. Every function returns an
//! [`EmiStatus`]; on failure the message is available from
//! [`emi_last_error_message`] on the same thread. Handles and strings must be
//! released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use emi_core::machin::{gamma_select, machin_eval, MachinTwoTerm, RoundingMode, SecondArgMode, DEFAULT_DIGIT_CAP};
use emi_core::selfcheck::{self_check_pi, verify_pi};
use emi_core::series::{atan_emi, atan_to_precision};
use emi_core::{EmiError, FixedReal, Precision};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    DivisionByZero = 5,
    Domain = 6,
    AmbiguousRounding = 7,
    DigitCapExceeded = 8,
    SelfCheckFailed = 9,
    InsufficientScale = 10,
    Panic = 99,
}

/// Opaque decimal fixed-point real.
pub struct EmiReal(FixedReal);

/// Opaque two-term Machin-like formula.
pub struct EmiMachin(MachinTwoTerm);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(EmiStatus, String);

impl From<EmiError> for Failure {
    fn from(e: EmiError) -> Self {
        let status = match &e {
            EmiError::DivisionByZero => EmiStatus::DivisionByZero,
            EmiError::NegativeOperand | EmiError::ZeroArgument | EmiError::DomainError(_) => EmiStatus::Domain,
            EmiError::InsufficientScale { .. } => EmiStatus::InsufficientScale,
            EmiError::EmptyInterval | EmiError::InvalidArgument(_) => EmiStatus::InvalidArgument,
            EmiError::AmbiguousRounding { .. } => EmiStatus::AmbiguousRounding,
            EmiError::DigitCapExceeded { .. } => EmiStatus::DigitCapExceeded,
            EmiError::SelfCheckFailed { .. } => EmiStatus::SelfCheckFailed,
            EmiError::Parse(_) => EmiStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EmiStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status and a message.
fn guarded(body: impl FnOnce() -> Result<(), Failure>) -> EmiStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            EmiStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            EmiStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(EmiStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(s).map_err(|e| Failure(EmiStatus::InvalidArgument, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn emi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a decimal such as `-1.25e-3`.
///
/// # Safety
/// `s` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn emi_real_from_str(s: *const c_char, out: *mut *mut EmiReal) -> EmiStatus {
    guarded(|| {
        let v: FixedReal = read_str(s, "input string")?.parse()?;
        write_out(out, EmiReal(v))
    })
}

/// # Safety
/// `r` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn emi_real_free(r: *mut EmiReal) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Renders `r` truncated to `digits` fractional digits.
///
/// # Safety
/// `r` must be a live handle and `out` a writable pointer. Free the result
/// with [`emi_string_free`].
#[no_mangle]
pub unsafe extern "C" fn emi_real_to_string(r: *const EmiReal, digits: u32, out: *mut *mut c_char) -> EmiStatus {
    guarded(|| {
        let r = borrow(r, "real")?;
        write_string(out, r.0.to_digits(digits)?)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn emi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `atan(x)` with `subintervals` nodes and `n_max` terms per node, carried
/// to `digits` digits plus guard.
///
/// # Safety
/// `x` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn emi_atan(
    x: *const EmiReal,
    subintervals: u32,
    n_max: u32,
    digits: u32,
    out: *mut *mut EmiReal,
) -> EmiStatus {
    guarded(|| {
        let x = borrow(x, "x")?;
        let prec = Precision::for_series(digits, n_max, subintervals.max(1));
        let v = atan_emi(&x.0, subintervals, n_max, prec)?.value;
        write_out(out, EmiReal(v))
    })
}

/// `atan(x)` correct to `digits` digits, choosing `n_max` automatically.
///
/// # Safety
/// `x` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn emi_atan_to_precision(
    x: *const EmiReal,
    subintervals: u32,
    digits: u32,
    out: *mut *mut EmiReal,
) -> EmiStatus {
    guarded(|| {
        let x = borrow(x, "x")?;
        if subintervals == 0 {
            return Err(Failure(
                EmiStatus::InvalidArgument,
                "subintervals must be at least 1".into(),
            ));
        }
        let v = atan_to_precision(&x.0, subintervals, digits)?.value;
        write_out(out, EmiReal(v))
    })
}

fn rounding(ceil: bool) -> RoundingMode {
    if ceil {
        RoundingMode::Ceil
    } else {
        RoundingMode::Floor
    }
}

/// Pi to `digits` digits from the generated formula for `k` (floor gamma,
/// fixed-point second argument), verified against the self-check pair.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn emi_pi(k: u32, subintervals: u32, digits: u32, out: *mut *mut EmiReal) -> EmiStatus {
    guarded(|| {
        if subintervals == 0 {
            return Err(Failure(
                EmiStatus::InvalidArgument,
                "subintervals must be at least 1".into(),
            ));
        }
        let f = MachinTwoTerm::generate(
            k,
            0,
            RoundingMode::Floor,
            SecondArgMode::Fixed,
            Precision::with_digits(digits),
        )?;
        let n = f.terms_for_digits(subintervals, digits);
        let pi = machin_eval(&f, subintervals, n, Precision::for_series(digits, n, subintervals))?;
        verify_pi(&pi, digits)?;
        write_out(out, EmiReal(pi))
    })
}

/// `gamma` for `k` on a `10^-grain` grid, written as `num/den`.
///
/// # Safety
/// `out` must be a writable pointer. Free the result with [`emi_string_free`].
#[no_mangle]
pub unsafe extern "C" fn emi_gamma_select(
    k: u32,
    grain: u32,
    ceil: bool,
    digits: u32,
    out: *mut *mut c_char,
) -> EmiStatus {
    guarded(|| {
        let g = gamma_select(k, grain, rounding(ceil), Precision::with_digits(digits))?;
        write_string(out, format!("{}/{}", g.numer(), g.denom()))
    })
}

/// Generates the formula for `k`. With `exact`, the second argument is kept
/// as a rational (fails with `DigitCapExceeded` past a million digits).
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn emi_machin_generate(
    k: u32,
    grain: u32,
    ceil: bool,
    exact: bool,
    digits: u32,
    out: *mut *mut EmiMachin,
) -> EmiStatus {
    guarded(|| {
        let mode = if exact {
            SecondArgMode::Exact { cap: DEFAULT_DIGIT_CAP }
        } else {
            SecondArgMode::Fixed
        };
        let f = MachinTwoTerm::generate(k, grain, rounding(ceil), mode, Precision::with_digits(digits))?;
        write_out(out, EmiMachin(f))
    })
}

/// `k=<int> gamma=<num>/<den> second_arg=<num>/<den>|fixed:<decimal> digits=<p>`
///
/// # Safety
/// `f` must be a live handle and `out` a writable pointer. Free the result
/// with [`emi_string_free`].
#[no_mangle]
pub unsafe extern "C" fn emi_machin_to_record(f: *const EmiMachin, out: *mut *mut c_char) -> EmiStatus {
    guarded(|| {
        let f = borrow(f, "formula")?;
        write_string(out, f.0.to_string())
    })
}

/// Parses a record produced by [`emi_machin_to_record`].
///
/// # Safety
/// `s` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn emi_machin_from_record(s: *const c_char, out: *mut *mut EmiMachin) -> EmiStatus {
    guarded(|| {
        let f: MachinTwoTerm = read_str(s, "record")?.parse()?;
        write_out(out, EmiMachin(f))
    })
}

/// `4 (2^(k-1) atan(1/gamma) + atan(second_arg))` with `n_max` terms per node.
///
/// # Safety
/// `f` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn emi_machin_eval(
    f: *const EmiMachin,
    subintervals: u32,
    n_max: u32,
    digits: u32,
    out: *mut *mut EmiReal,
) -> EmiStatus {
    guarded(|| {
        let f = borrow(f, "formula")?;
        let prec = Precision::for_series(digits, n_max, subintervals.max(1));
        let v = machin_eval(&f.0, subintervals, n_max, prec)?;
        write_out(out, EmiReal(v))
    })
}

/// # Safety
/// `f` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn emi_machin_free(f: *mut EmiMachin) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Pi from two independent formulas that must agree to `digits` digits.
///
/// # Safety
/// `out` must be a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn emi_self_check_pi(digits: u32, out: *mut *mut EmiReal) -> EmiStatus {
    guarded(|| write_out(out, EmiReal(self_check_pi(digits)?)))
}
