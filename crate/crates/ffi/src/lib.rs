//! C ABI over the autoseries engine.
//!
//! Every object crosses the boundary as an opaque pointer owned by the caller
//! and released with the matching `*_free`. Fallible calls return an
//! [`AsStatus`] and write their result through an out-pointer; the message of
//! the last failure on the calling thread is available from
//! [`as_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use autoseries::christol::{christol_forward_capped, AlgebraicSeriesRep, ORBIT_CAP};
use autoseries::coeff_fields::Field;
use autoseries::dfao_engine::Dfao;
use autoseries::series_core::{self, QuasiAutomaticSeries, Q};
use autoseries::zero_sets::algebraic_zero_dfao;
use autoseries::Error;

/// Status codes; the nonzero library codes match the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8 or an out-of-range scalar argument.
    InvalidArgument = 1,
    User = 2,
    Resource = 3,
    Verification = 4,
    /// A panic was caught at the boundary.
    Internal = 5,
}

/// A finite field F_q.
pub struct AsField(Field);

/// An automatic generalized power series.
pub struct AsSeries(QuasiAutomaticSeries);

/// A finite automaton with output.
pub struct AsDfao(Dfao);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn from_error(e: &Error) -> AsStatus {
    set_error(&e.to_string());
    match e {
        Error::User(_) => AsStatus::User,
        Error::Resource { .. } => AsStatus::Resource,
        Error::Verification(_) => AsStatus::Verification,
    }
}

fn invalid(msg: &str) -> AsStatus {
    set_error(msg);
    AsStatus::InvalidArgument
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), AsStatus>) -> AsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AsStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            AsStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, AsStatus> {
    if s.is_null() {
        return Err(invalid(&format!("{} is null", what)));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid(&format!("{} is not UTF-8", what)))
}

unsafe fn obj<'a, T>(p: *const T, what: &str) -> Result<&'a T, AsStatus> {
    p.as_ref().ok_or_else(|| invalid(&format!("{} is null", what)))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), AsStatus> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

fn exponent(num: i64, den: i64) -> Result<Q, AsStatus> {
    if den <= 0 {
        return Err(invalid("exponent denominator must be positive"));
    }
    Ok(Q::new(num as i128, den as i128))
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn as_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// The default field F_{p^e}.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn as_field_new(p: u32, e: u32, out: *mut *mut AsField) -> AsStatus {
    guard(|| {
        let f = Field::default_for(p, e).map_err(|e| from_error(&e))?;
        put(out, AsField(f))
    })
}

/// Field size q, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a handle from [`as_field_new`].
#[no_mangle]
pub unsafe extern "C" fn as_field_size(f: *const AsField) -> u32 {
    f.as_ref().map_or(0, |f| f.0.q())
}

/// # Safety
/// `f` must be null or a handle from [`as_field_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn as_field_free(f: *mut AsField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The power-series root of `equation` (a polynomial in t and y) whose
/// constant term is `x0`, as an automatic series.
///
/// # Safety
/// `field` must be a live field handle, `equation` a NUL-terminated string
/// and `out` valid writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn as_series_christol(field: *const AsField, equation: *const c_char, x0: u32, out: *mut *mut AsSeries) -> AsStatus {
    guard(|| {
        let f = obj(field, "field")?;
        let text = str_arg(equation, "equation")?;
        let rep = AlgebraicSeriesRep::parse(text, &f.0, vec![x0]).map_err(|e| from_error(&e))?;
        let out_series = christol_forward_capped(&rep, ORBIT_CAP).map_err(|e| from_error(&e))?;
        put(out, AsSeries(out_series.series))
    })
}

/// Parses the JSON form written by [`as_series_to_json`] or the CLI.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn as_series_from_json(json: *const c_char, out: *mut *mut AsSeries) -> AsStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| {
            set_error(&e.to_string());
            AsStatus::User
        })?;
        let v = v.get("series").cloned().unwrap_or(v);
        let s = QuasiAutomaticSeries::from_json(&v).map_err(|e| from_error(&e))?;
        put(out, AsSeries(s))
    })
}

/// JSON text of the series; release it with [`as_string_free`].
///
/// # Safety
/// `s` must be a live series handle and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn as_series_to_json(s: *const AsSeries, out: *mut *mut c_char) -> AsStatus {
    guard(|| {
        let s = obj(s, "series")?;
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        let text = serde_json::to_string(&s.0.to_json()).expect("series JSON serializes");
        *out = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn as_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Coefficient of t^(num/den) as a field element code.
///
/// # Safety
/// `s` must be a live series handle and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn as_series_coeff(s: *const AsSeries, num: i64, den: i64, out: *mut u32) -> AsStatus {
    guard(|| {
        let s = obj(s, "series")?;
        let e = exponent(num, den)?;
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        *out = s.0.coeff(&e);
        Ok(())
    })
}

/// Dimension of the underlying semilinear representation, 0 for null.
///
/// # Safety
/// `s` must be null or a live series handle.
#[no_mangle]
pub unsafe extern "C" fn as_series_dim(s: *const AsSeries) -> usize {
    s.as_ref().map_or(0, |s| s.0.dim())
}

unsafe fn binary(
    a: *const AsSeries,
    b: *const AsSeries,
    out: *mut *mut AsSeries,
    op: fn(&QuasiAutomaticSeries, &QuasiAutomaticSeries) -> autoseries::Result<QuasiAutomaticSeries>,
) -> AsStatus {
    guard(|| {
        let (a, b) = (obj(a, "left series")?, obj(b, "right series")?);
        let r = op(&a.0, &b.0).map_err(|e| from_error(&e))?;
        put(out, AsSeries(r))
    })
}

/// Sum of two series over the same field.
///
/// # Safety
/// `a` and `b` must be live series handles and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn as_series_add(a: *const AsSeries, b: *const AsSeries, out: *mut *mut AsSeries) -> AsStatus {
    binary(a, b, out, series_core::add)
}

/// Coefficientwise product.
///
/// # Safety
/// As for [`as_series_add`].
#[no_mangle]
pub unsafe extern "C" fn as_series_hadamard(a: *const AsSeries, b: *const AsSeries, out: *mut *mut AsSeries) -> AsStatus {
    binary(a, b, out, series_core::hadamard)
}

/// Cauchy product.
///
/// # Safety
/// As for [`as_series_add`].
#[no_mangle]
pub unsafe extern "C" fn as_series_mul(a: *const AsSeries, b: *const AsSeries, out: *mut *mut AsSeries) -> AsStatus {
    binary(a, b, out, series_core::mul_fq)
}

/// Terms with exponent below num/den.
///
/// # Safety
/// `s` must be a live series handle and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn as_series_truncate(s: *const AsSeries, num: i64, den: i64, out: *mut *mut AsSeries) -> AsStatus {
    guard(|| {
        let s = obj(s, "series")?;
        let r = series_core::truncate(&s.0, &exponent(num, den)?).map_err(|e| from_error(&e))?;
        put(out, AsSeries(r))
    })
}

/// # Safety
/// `s` must be null or a live series handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn as_series_free(s: *mut AsSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Automaton accepting the canonical words of the exponents whose
/// coefficient vanishes.
///
/// # Safety
/// `s` must be a live series handle and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn as_series_zero_set(s: *const AsSeries, out: *mut *mut AsDfao) -> AsStatus {
    guard(|| {
        let s = obj(s, "series")?;
        let m = algebraic_zero_dfao(&s.0).map_err(|e| from_error(&e))?;
        put(out, AsDfao(m))
    })
}

/// Number of states, 0 for null.
///
/// # Safety
/// `m` must be null or a live automaton handle.
#[no_mangle]
pub unsafe extern "C" fn as_dfao_states(m: *const AsDfao) -> usize {
    m.as_ref().map_or(0, |m| m.0.states)
}

/// Output on the canonical base-p word of num/den, with den a power of p.
///
/// # Safety
/// `m` must be a live automaton handle and `out` valid writable storage.
#[no_mangle]
pub unsafe extern "C" fn as_dfao_eval(m: *const AsDfao, num: u64, den: u64, out: *mut u32) -> AsStatus {
    guard(|| {
        let m = obj(m, "automaton")?;
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        let p = m.0.p as u64;
        let (mut d, mut k) = (den, 0u32);
        while d > 1 && d % p == 0 {
            d /= p;
            k += 1;
        }
        if d != 1 {
            return Err(invalid("denominator must be a power of p"));
        }
        let v = autoseries::base_p_codec::PAdicNonneg::new(num as u128, k, m.0.p);
        let w = autoseries::base_p_codec::encode_frac(v, m.0.p);
        *out = m.0.run_word(&w).map_err(|e| from_error(&e))?;
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a live automaton handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn as_dfao_free(m: *mut AsDfao) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}
