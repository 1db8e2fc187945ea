//! C ABI over `circfam`.
//!
//! Objects cross the boundary as opaque handles created by `cf_*` functions
//! and released with the matching `*_free`. Every fallible call returns a
//! [`CfStatus`]; on failure [`cf_last_error`] describes the most recent error
//! on the calling thread. Strings returned to the caller are owned by it and
//! must be released with [`cf_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use circfam::constructions::{
    construct_blowup, construct_mid_p, construct_recursive_q2, construct_small_p,
};
use circfam::search::{decide_embedding, SearchLimits, SearchProblem, Status};
use circfam::{
    circulant, intersection_matrix, BoolMatrix, Certificate, CirculantSpec, Error, Verdict,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Range = 3,
    DimensionMismatch = 4,
    Parse = 5,
    Unverified = 6,
    Io = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfSearchStatus {
    Witness = 0,
    Nonexistent = 1,
    Inconclusive = 2,
}

/// Outcome of [`cf_certificate_verify`]. When `passed` is false and
/// `mismatch` is true, `row` and `col` locate the first wrong cell.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CfVerdict {
    pub passed: bool,
    pub mismatch: bool,
    pub shift: usize,
    pub row: usize,
    pub col: usize,
}

/// Opaque Boolean matrix.
pub struct CfMatrix {
    inner: BoolMatrix,
}

/// Opaque family-pair certificate.
pub struct CfCertificate {
    inner: Certificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> CfStatus {
    match e {
        Error::InvalidSpec(_) | Error::InvalidArgument(_) | Error::Uniformity { .. } => {
            CfStatus::InvalidArgument
        }
        Error::Range { .. } | Error::Divisibility { .. } | Error::Cap { .. } => CfStatus::Range,
        Error::DimensionMismatch { .. } | Error::NotADecomposition { .. } => {
            CfStatus::DimensionMismatch
        }
        Error::Parse { .. } | Error::Json(_) => CfStatus::Parse,
        Error::Unverified(_) => CfStatus::Unverified,
        Error::Io(_) => CfStatus::Io,
    }
}

fn guard(body: impl FnOnce() -> Result<(), (CfStatus, String)>) -> CfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => CfStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            CfStatus::Panic
        }
    }
}

fn lift<T>(r: circfam::Result<T>) -> Result<T, (CfStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (CfStatus, String) {
    (CfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (CfStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), (CfStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn cf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

#[no_mangle]
pub unsafe extern "C" fn cf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The canonical circulant `C_{p,q}`.
#[no_mangle]
pub unsafe extern "C" fn cf_circulant(p: usize, q: usize, out: *mut *mut CfMatrix) -> CfStatus {
    guard(|| {
        let spec = lift(CirculantSpec::new(p, q))?;
        let inner = lift(circulant(spec))?;
        store(out, CfMatrix { inner })
    })
}

#[no_mangle]
pub unsafe extern "C" fn cf_matrix_free(m: *mut CfMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of rows, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn cf_matrix_rows(m: *const CfMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.rows())
}

/// Number of columns, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn cf_matrix_cols(m: *const CfMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.inner.cols())
}

#[no_mangle]
pub unsafe extern "C" fn cf_matrix_get(
    m: *const CfMatrix,
    row: usize,
    col: usize,
    out: *mut bool,
) -> CfStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        if row >= m.inner.rows() || col >= m.inner.cols() {
            return Err((
                CfStatus::InvalidArgument,
                format!(
                    "({row}, {col}) outside {}x{}",
                    m.inner.rows(),
                    m.inner.cols()
                ),
            ));
        }
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        *out = m.inner.get(row, col);
        Ok(())
    })
}

/// Boolean product `a * b`.
#[no_mangle]
pub unsafe extern "C" fn cf_matrix_product(
    a: *const CfMatrix,
    b: *const CfMatrix,
    out: *mut *mut CfMatrix,
) -> CfStatus {
    guard(|| {
        let (a, b) = (deref(a, "left matrix")?, deref(b, "right matrix")?);
        let inner = lift(a.inner.bool_product(&b.inner))?;
        store(out, CfMatrix { inner })
    })
}

/// Row `r` of the result is row `(r + shift) mod n` of `m`.
#[no_mangle]
pub unsafe extern "C" fn cf_matrix_rotate_rows(
    m: *const CfMatrix,
    shift: i64,
    out: *mut *mut CfMatrix,
) -> CfStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        let inner = lift(m.inner.rotate_rows(shift))?;
        store(out, CfMatrix { inner })
    })
}

/// Rows of `0`/`1` characters, one per line.
#[no_mangle]
pub unsafe extern "C" fn cf_matrix_to_text(m: *const CfMatrix, out: *mut *mut c_char) -> CfStatus {
    guard(|| {
        let m = deref(m, "matrix")?;
        store_string(out, m.inner.to_text())
    })
}

unsafe fn store_string(out: *mut *mut c_char, text: String) -> Result<(), (CfStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    let c = CString::new(text).map_err(|e| (CfStatus::InvalidArgument, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

fn certificate_of(
    report: circfam::Result<circfam::constructions::ConstructionReport>,
) -> Result<CfCertificate, (CfStatus, String)> {
    let report = lift(report)?;
    Ok(CfCertificate {
        inner: report.certificate(),
    })
}

#[no_mangle]
pub unsafe extern "C" fn cf_construct_small_p(
    t: usize,
    p: usize,
    q: usize,
    k: usize,
    out: *mut *mut CfCertificate,
) -> CfStatus {
    guard(|| store(out, certificate_of(construct_small_p(t, p, q, k))?))
}

#[no_mangle]
pub unsafe extern "C" fn cf_construct_mid_p(
    t: usize,
    p: usize,
    q: usize,
    out: *mut *mut CfCertificate,
) -> CfStatus {
    guard(|| store(out, certificate_of(construct_mid_p(t, p, q))?))
}

#[no_mangle]
pub unsafe extern "C" fn cf_construct_blowup(
    t: usize,
    q: usize,
    out: *mut *mut CfCertificate,
) -> CfStatus {
    guard(|| store(out, certificate_of(construct_blowup(t, q))?))
}

#[no_mangle]
pub unsafe extern "C" fn cf_construct_recursive_q2(
    t: usize,
    out: *mut *mut CfCertificate,
) -> CfStatus {
    guard(|| store(out, certificate_of(construct_recursive_q2(t))?))
}

#[no_mangle]
pub unsafe extern "C" fn cf_certificate_free(c: *mut CfCertificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Parses a certificate document from a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn cf_certificate_from_json(
    json: *const c_char,
    out: *mut *mut CfCertificate,
) -> CfStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (CfStatus::Parse, format!("not UTF-8: {e}")))?;
        let inner = lift(Certificate::from_json_str(text))?;
        store(out, CfCertificate { inner })
    })
}

#[no_mangle]
pub unsafe extern "C" fn cf_certificate_to_json(
    c: *const CfCertificate,
    out: *mut *mut c_char,
) -> CfStatus {
    guard(|| {
        let c = deref(c, "certificate")?;
        store_string(out, c.inner.to_json_string())
    })
}

/// Order `p + q` of the certificate's target, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn cf_certificate_order(c: *const CfCertificate) -> usize {
    c.as_ref().map_or(0, |c| c.inner.p + c.inner.q)
}

#[no_mangle]
pub unsafe extern "C" fn cf_certificate_verify(
    c: *const CfCertificate,
    out: *mut CfVerdict,
) -> CfStatus {
    guard(|| {
        let c = deref(c, "certificate")?;
        let out = out.as_mut().ok_or_else(|| null("output pointer"))?;
        *out = match lift(c.inner.verify())? {
            Verdict::Pass { shift, .. } => CfVerdict {
                passed: true,
                shift,
                ..CfVerdict::default()
            },
            Verdict::CellMismatch { row, col, .. } => CfVerdict {
                mismatch: true,
                row,
                col,
                ..CfVerdict::default()
            },
            Verdict::Malformed(why) => {
                set_last_error(why);
                CfVerdict::default()
            }
        };
        Ok(())
    })
}

/// The matrix of pairwise intersections of the certificate's members.
#[no_mangle]
pub unsafe extern "C" fn cf_certificate_intersection_matrix(
    c: *const CfCertificate,
    out: *mut *mut CfMatrix,
) -> CfStatus {
    guard(|| {
        let c = deref(c, "certificate")?;
        let pair = lift(c.inner.to_pair())?;
        store(
            out,
            CfMatrix {
                inner: intersection_matrix(&pair),
            },
        )
    })
}

/// Decides whether the canonical `C_{p,q}` embeds in `A_{k,t}`.
///
/// `max_nodes == 0` means no budget; `workers == 0` picks a default. When a
/// witness is found and `witness` is non-null, a certificate is stored there;
/// otherwise `*witness` is set to null.
#[no_mangle]
pub unsafe extern "C" fn cf_decide_embedding(
    k: usize,
    t: usize,
    p: usize,
    q: usize,
    max_nodes: u64,
    workers: usize,
    status: *mut CfSearchStatus,
    witness: *mut *mut CfCertificate,
) -> CfStatus {
    guard(|| {
        let status = status.as_mut().ok_or_else(|| null("status pointer"))?;
        let mut problem = lift(SearchProblem::new(k, t, p, q))?;
        problem.limits = SearchLimits {
            max_nodes: (max_nodes > 0).then_some(max_nodes),
            max_time: None,
        };
        problem.workers = (workers > 0).then_some(workers);
        let outcome = lift(decide_embedding(&problem))?;
        *status = match outcome.status {
            Status::Witness => CfSearchStatus::Witness,
            Status::Nonexistent => CfSearchStatus::Nonexistent,
            Status::Inconclusive => CfSearchStatus::Inconclusive,
        };
        if !witness.is_null() {
            *witness = match &outcome.witness {
                Some(pair) => Box::into_raw(Box::new(CfCertificate {
                    inner: problem.certificate(pair),
                })),
                None => ptr::null_mut(),
            };
        }
        Ok(())
    })
}
