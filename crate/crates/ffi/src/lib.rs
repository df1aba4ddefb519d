//! C interface to the qcong engine.
//!
//! Series live behind an opaque `QcSeries` handle owned by the caller and
//! released with `qc_series_free`. Every fallible call returns a `QcStatus`;
//! on failure `qc_last_error` describes the problem until the next call on
//! the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use qcong::congruence::{verify_claim, CongruenceClaim, KFamily};
use qcong::grammar::parse_series_spec;
use qcong::partitions::{a_bruteforce, a_table_series};
use qcong::{CoefficientRing, Error, Series};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NotInvertible = 4,
    OutOfRange = 5,
    /// A coefficient does not fit the requested integer type.
    Overflow = 6,
    ResourceCeiling = 7,
    Panic = 8,
}

/// Opaque truncated power series.
pub struct QcSeries(Series);

/// Outcome of `qc_verify_claim`. Witness fields are meaningful only when
/// `verified` is false.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QcVerification {
    pub verified: bool,
    pub checked_n_up_to: u64,
    pub checked_j_up_to: u64,
    pub witness_j: u64,
    pub witness_k: u64,
    pub witness_n: u64,
    pub witness_residue: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> QcStatus {
    match e {
        Error::Parse { .. } => QcStatus::ParseError,
        Error::NotInvertible { .. } => QcStatus::NotInvertible,
        Error::EmptyExtraction { .. } | Error::OracleBound { .. } => QcStatus::OutOfRange,
        Error::ResourceCeiling { .. } => QcStatus::ResourceCeiling,
        _ => QcStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (QcStatus, String)>) -> QcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            QcStatus::Panic
        }
    }
}

fn lift<T>(r: qcong::Result<T>) -> Result<T, (QcStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (QcStatus, String) {
    (QcStatus::NullPointer, format!("{what} is null"))
}

fn ring_of(modulus: u64) -> Result<CoefficientRing, (QcStatus, String)> {
    match modulus {
        0 => Ok(CoefficientRing::Exact),
        m => lift(CoefficientRing::modular(m)),
    }
}

unsafe fn put_series(out: *mut *mut QcSeries, s: Series) {
    *out = Box::into_raw(Box::new(QcSeries(s)));
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Expand an eta quotient (`"2^2 * 1^-3"`) or Pochhammer quotient
/// (`"[2,3;5]/[1,4;5]"`) to `n_terms` coefficients. `modulus` 0 selects exact
/// integers.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_series_from_spec(
    spec: *const c_char,
    modulus: u64,
    n_terms: usize,
    out: *mut *mut QcSeries,
) -> QcStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(spec)
            .to_str()
            .map_err(|_| (QcStatus::InvalidArgument, "spec is not UTF-8".to_string()))?;
        let parsed = lift(parse_series_spec(text))?;
        let series = lift(parsed.expand(ring_of(modulus)?, n_terms))?;
        put_series(out, series);
        Ok(())
    })
}

/// Generating function of `a_k(n)` to `n_terms` coefficients.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_series_colored(
    k: u64,
    modulus: u64,
    n_terms: usize,
    out: *mut *mut QcSeries,
) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let table = lift(a_table_series(k, ring_of(modulus)?, n_terms))?;
        put_series(out, table.into_series());
        Ok(())
    })
}

/// Number of stored coefficients; 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qc_series_len(s: *const QcSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.precision())
}

/// Coefficient `i` as a signed 64-bit integer.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_series_coeff(s: *const QcSeries, i: usize, out: *mut i64) -> QcStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if i >= s.0.precision() {
            return Err((
                QcStatus::OutOfRange,
                format!("index {i} beyond precision {}", s.0.precision()),
            ));
        }
        let c = s.0.coeff(i);
        *out = c.to_i64().ok_or_else(|| {
            (
                QcStatus::Overflow,
                format!("coefficient {c} does not fit in 64 bits"),
            )
        })?;
        Ok(())
    })
}

/// Coefficient `i` in decimal, nul-terminated, written to `buf` of `buf_len`
/// bytes. `needed` receives the required size including the nul, so a call
/// with `buf_len` 0 queries the size.
///
/// # Safety
/// `s` must be a live handle, `needed` a valid pointer, and `buf` valid for
/// `buf_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn qc_series_coeff_decimal(
    s: *const QcSeries,
    i: usize,
    buf: *mut c_char,
    buf_len: usize,
    needed: *mut usize,
) -> QcStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        if needed.is_null() {
            return Err(null("needed"));
        }
        if i >= s.0.precision() {
            return Err((
                QcStatus::OutOfRange,
                format!("index {i} beyond precision {}", s.0.precision()),
            ));
        }
        let text = s.0.coeff(i).to_string();
        *needed = text.len() + 1;
        if buf_len == 0 {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        if buf_len < text.len() + 1 {
            return Err((
                QcStatus::OutOfRange,
                format!("buffer of {buf_len} bytes, need {}", text.len() + 1),
            ));
        }
        ptr::copy_nonoverlapping(text.as_ptr() as *const c_char, buf, text.len());
        *buf.add(text.len()) = 0;
        Ok(())
    })
}

/// New series holding coefficients `step * n + offset` of `s`.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_series_extract(
    s: *const QcSeries,
    step: u64,
    offset: u64,
    out: *mut *mut QcSeries,
) -> QcStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("series"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let sub = lift(s.0.extract_progression(step, offset))?;
        put_series(out, sub);
        Ok(())
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_series_free(s: *mut QcSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Check `a_{c j + k0}(step n + offset) = 0 (mod modulus)` for every
/// coefficient below `n_terms` and every `j <= j_max`. `c` 0 pins `k = k0`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_verify_claim(
    c: u64,
    k0: u64,
    step: u64,
    offset: u64,
    modulus: u64,
    n_terms: usize,
    j_max: u64,
    out: *mut QcVerification,
) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let claim = CongruenceClaim::new(KFamily { c, k0 }, step, offset, modulus);
        let r = lift(verify_claim(&claim, n_terms, j_max))?;
        let w = r.witness.unwrap_or_default();
        *out = QcVerification {
            verified: r.is_verified(),
            checked_n_up_to: r.checked_n_up_to,
            checked_j_up_to: r.checked_j_up_to,
            witness_j: w.j,
            witness_k: w.k,
            witness_n: w.n,
            witness_residue: w.residue,
        };
        Ok(())
    })
}

/// `a_k(n)` by direct enumeration, `n <= 40`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qc_a_bruteforce(k: u64, n: u64, out: *mut u64) -> QcStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let v = lift(a_bruteforce(k, n))?;
        *out = v.to_u64().ok_or_else(|| {
            (
                QcStatus::Overflow,
                format!("a_{k}({n}) = {v} does not fit in 64 bits"),
            )
        })?;
        Ok(())
    })
}
