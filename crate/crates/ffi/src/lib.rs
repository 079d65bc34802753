//! C ABI over the `shiftpd` core.
//!
//! Objects cross the boundary as opaque handles that the caller frees with
//! the matching `*_free` function. Every fallible call returns a
//! [`ShiftpdStatus`]; on failure the message is kept per thread and read
//! with [`shiftpd_last_error_message`]. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shiftpd::bounds::{topfanin_ratio, topfanin_ratio_unchecked, BoundsConfig, Mode, ParamSet};
use shiftpd::gf2lin::{gf_mul, Gf2kField};
use shiftpd::measure::{shifted_partials_dim, MeasureQuery};
use shiftpd::nw::{generate_nw, NWParams};
use shiftpd::poly::{parse_polynomial, to_file_text, Polynomial, VarId, VarSpace};
use shiftpd::restrict::{run_restriction, Eps, RestrictionOutcome};
use shiftpd::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftpdStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    BudgetExceeded = 3,
    PreconditionFailed = 4,
    NullPointer = 5,
    Internal = 6,
}

/// A polynomial with exact rational coefficients.
pub struct ShiftpdPolynomial(Polynomial);

/// The result of one run of the restriction procedure.
pub struct ShiftpdOutcome(RestrictionOutcome);

/// Shifted-partials query; `m = 0` allows every shift support and
/// `num_vars = 0` infers the variable space from the polynomial.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct ShiftpdMeasureQuery {
    pub r: u32,
    pub ell: u32,
    pub m: u32,
    pub num_vars: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ShiftpdStatus {
    match e {
        Error::Parse { .. } => ShiftpdStatus::ParseError,
        Error::BudgetExceeded { .. } => ShiftpdStatus::BudgetExceeded,
        Error::Precondition(_) | Error::ConstraintViolation(_) | Error::EmptyFeasibleRegion => {
            ShiftpdStatus::PreconditionFailed
        }
        _ => ShiftpdStatus::InvalidArgument,
    }
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (ShiftpdStatus, String)>) -> ShiftpdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ShiftpdStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            ShiftpdStatus::Internal
        }
    }
}

fn lift<T>(r: shiftpd::Result<T>) -> Result<T, (ShiftpdStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (ShiftpdStatus, String) {
    (ShiftpdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), (ShiftpdStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn shiftpd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn shiftpd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// `a·b` in the standard GF(2^k).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_gf_mul(k: u32, a: u32, b: u32, out: *mut u32) -> ShiftpdStatus {
    guard(|| {
        let f = lift(Gf2kField::standard(k))?;
        let v = lift(gf_mul(a, b, &f))?;
        write_out(out, v)
    })
}

/// Parse the text polynomial format.
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_poly_parse(text: *const c_char, out: *mut *mut ShiftpdPolynomial) -> ShiftpdStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (ShiftpdStatus::ParseError, "text is not UTF-8".to_string()))?;
        let p = lift(parse_polynomial(s))?;
        write_out(out, Box::into_raw(Box::new(ShiftpdPolynomial(p))))
    })
}

/// `NW_d` over the `2^k × 2^k` grid.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_nw_generate(
    k: u32,
    d: u32,
    budget: u64,
    out: *mut *mut ShiftpdPolynomial,
) -> ShiftpdStatus {
    guard(|| {
        let params = lift(NWParams::new(k, d))?;
        let p = lift(generate_nw(&params, budget))?;
        write_out(out, Box::into_raw(Box::new(ShiftpdPolynomial(p))))
    })
}

/// Number of terms, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_poly_term_count(p: *const ShiftpdPolynomial) -> usize {
    p.as_ref().map_or(0, |p| p.0.num_terms())
}

/// Canonical text; free the result with [`shiftpd_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_poly_to_string(p: *const ShiftpdPolynomial, out: *mut *mut c_char) -> ShiftpdStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("polynomial"))?;
        let s = CString::new(to_file_text(&p.0)).expect("polynomial text has no nul");
        write_out(out, s.into_raw())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `p` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_poly_free(p: *mut ShiftpdPolynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Exact shifted-partials dimension.
///
/// # Safety
/// `p` and `q` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_measure_dim(
    p: *const ShiftpdPolynomial,
    q: *const ShiftpdMeasureQuery,
    budget: u64,
    out: *mut u64,
) -> ShiftpdStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("polynomial"))?;
        let q = q.as_ref().ok_or_else(|| null("query"))?;
        let query = match q.m {
            0 => MeasureQuery::unrestricted(q.r, q.ell),
            m => MeasureQuery::bounded(q.r, q.ell, m),
        };
        let space = match q.num_vars {
            0 => VarSpace::covering(&p.0),
            n => VarSpace::flat(n),
        };
        let dim = lift(shifted_partials_dim(&p.0, &query, &space, budget))?;
        write_out(out, dim)
    })
}

/// Run the restriction with `ε = eps_num/eps_den`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_restrict_run(
    k: u32,
    d: u32,
    eps_num: u64,
    eps_den: u64,
    seed: u64,
    out: *mut *mut ShiftpdOutcome,
) -> ShiftpdStatus {
    guard(|| {
        if eps_den == 0 {
            return Err((ShiftpdStatus::InvalidArgument, "eps denominator is zero".into()));
        }
        let params = lift(NWParams::new(k, d))?;
        let o = lift(run_restriction(&params, Eps::new(eps_num, eps_den), seed))?;
        write_out(out, Box::into_raw(Box::new(ShiftpdOutcome(o))))
    })
}

/// Rank of the constraint matrix, or 0 for a null handle.
///
/// # Safety
/// `o` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_outcome_rank(o: *const ShiftpdOutcome) -> usize {
    o.as_ref().map_or(0, |o| o.0.state.rank())
}

/// `log2 |A_n|`, or 0 for a null handle.
///
/// # Safety
/// `o` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_outcome_log2_an_size(o: *const ShiftpdOutcome) -> usize {
    o.as_ref().map_or(0, |o| o.0.log2_an_size())
}

/// Whether the 0-based variable `(row, col)` was set to zero.
///
/// # Safety
/// `o` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_outcome_is_killed(
    o: *const ShiftpdOutcome,
    row: u32,
    col: u32,
    out: *mut bool,
) -> ShiftpdStatus {
    guard(|| {
        let o = o.as_ref().ok_or_else(|| null("outcome"))?;
        let n = o.0.params().n();
        if row >= n || col >= n {
            return Err((ShiftpdStatus::InvalidArgument, format!("({row}, {col}) outside the {n}x{n} grid")));
        }
        write_out(out, !o.0.survives(VarId::new(row, col)))
    })
}

/// JSON record; free with [`shiftpd_string_free`].
///
/// # Safety
/// `o` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_outcome_to_json(o: *const ShiftpdOutcome, out: *mut *mut c_char) -> ShiftpdStatus {
    guard(|| {
        let o = o.as_ref().ok_or_else(|| null("outcome"))?;
        let s = CString::new(o.0.to_json().to_string()).expect("json has no nul");
        write_out(out, s.into_raw())
    })
}

/// # Safety
/// `o` must be null or a live handle, which is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn shiftpd_outcome_free(o: *mut ShiftpdOutcome) {
    if !o.is_null() {
        drop(Box::from_raw(o));
    }
}

/// log2 of the top fan-in ratio at one parameter point, `N = n²`. With
/// `checked`, constraint violations fail with `PreconditionFailed`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn shiftpd_topfanin_log2(
    n: u64,
    d: u64,
    r: u64,
    ell: u64,
    m: u64,
    s: u64,
    t: u64,
    restricted: bool,
    eps_num: u64,
    eps_den: u64,
    checked: bool,
    out: *mut f64,
) -> ShiftpdStatus {
    guard(|| {
        if eps_den == 0 {
            return Err((ShiftpdStatus::InvalidArgument, "eps denominator is zero".into()));
        }
        let p = ParamSet::new(n, d, r, ell, m, s).with_t(t).with_eps(Eps::new(eps_num, eps_den));
        let mode = if restricted { Mode::Restricted } else { Mode::Plain };
        let cfg = BoundsConfig { exact_max_n: 0, ..BoundsConfig::default() };
        let b = if checked { lift(topfanin_ratio(&p, mode, &cfg))? } else { topfanin_ratio_unchecked(&p, mode, &cfg) };
        write_out(out, b.log2)
    })
}
