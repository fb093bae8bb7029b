//! C ABI over `sunflower-kit`.
//!
//! Families live behind an opaque `SkFamily` handle. Every fallible call
//! returns an `SkStatus`; on failure the message is kept per thread and read
//! with [`sk_last_error`]. Strings handed out by the library are freed with
//! [`sk_string_free`], families with [`sk_family_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use num_rational::BigRational;
use sunflower_kit::extension::ext_count;
use sunflower_kit::format::{parse_family, write_family};
use sunflower_kit::gamma::{gamma_unit_check, gamma_weighted_check};
use sunflower_kit::gen::{generate, rng_from_seed, Distribution};
use sunflower_kit::split::split1_identity_check;
use sunflower_kit::sunflower::sunflower_report;
use sunflower_kit::{Error, Holds, SetFamily, VerdictReport};

/// Opaque family handle.
pub struct SkFamily(SetFamily);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    InvalidFamily = 4,
    Parse = 5,
    Precondition = 6,
    BudgetExceeded = 7,
    Consistency = 8,
    Io = 9,
    Panic = 10,
}

/// Outcome of a check.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkHolds {
    False = 0,
    True = 1,
    Vacuous = 2,
    Inconclusive = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkDistribution {
    Uniform = 0,
    Star = 1,
    Clustered = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SkStatus {
    match e {
        Error::InvalidArgument(_) => SkStatus::InvalidArgument,
        Error::InvalidFamily(_) => SkStatus::InvalidFamily,
        Error::Parse { .. } => SkStatus::Parse,
        Error::Precondition { .. } => SkStatus::Precondition,
        Error::BudgetExceeded { .. } => SkStatus::BudgetExceeded,
        Error::Consistency(_) => SkStatus::Consistency,
        Error::Io(_) => SkStatus::Io,
    }
}

fn holds_of(h: Holds) -> SkHolds {
    match h {
        Holds::False => SkHolds::False,
        Holds::True => SkHolds::True,
        Holds::Vacuous => SkHolds::Vacuous,
        Holds::Inconclusive => SkHolds::Inconclusive,
    }
}

enum Fail {
    Status(SkStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Run `body`, turning errors and panics into a status plus a stored message.
fn guard<F: FnOnce() -> Result<(), Fail>>(body: F) -> SkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SkStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            SkStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(SkStatus::NullPointer, format!("null pointer: {what}"))
}

unsafe fn family<'a>(f: *const SkFamily) -> Result<&'a SetFamily, Fail> {
    f.as_ref().map(|h| &h.0).ok_or_else(|| null("family"))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

fn ratio(num: i64, den: i64) -> Result<BigRational, Fail> {
    if den == 0 {
        return Err(Fail::Status(SkStatus::InvalidArgument, "zero denominator".into()));
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn to_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s).map(CString::into_raw).map_err(|_| Fail::Status(SkStatus::InvalidUtf8, "interior NUL in output".into()))
}

fn report_json(r: &VerdictReport) -> Result<*mut c_char, Fail> {
    let s = serde_json::to_string(r).map_err(|e| Fail::Status(SkStatus::Io, e.to_string()))?;
    to_c_string(s)
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call into the library on the same thread; do not free.
#[no_mangle]
pub extern "C" fn sk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a family from NUL-terminated text (`n=.. m=..` header, one set per line).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out_family` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_family_parse(text: *const c_char, out_family: *mut *mut SkFamily) -> SkStatus {
    guard(|| {
        let slot = out(out_family, "out_family")?;
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|e| Fail::Status(SkStatus::InvalidUtf8, e.to_string()))?;
        *slot = Box::into_raw(Box::new(SkFamily(parse_family(text)?)));
        Ok(())
    })
}

/// Seeded random `m`-uniform family with `count` members on `n` elements.
///
/// # Safety
/// `out_family` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_family_generate(
    seed: u64,
    dist: SkDistribution,
    n: u32,
    m: u32,
    count: usize,
    out_family: *mut *mut SkFamily,
) -> SkStatus {
    guard(|| {
        let slot = out(out_family, "out_family")?;
        let dist = match dist {
            SkDistribution::Uniform => Distribution::Uniform,
            SkDistribution::Star => Distribution::Star,
            SkDistribution::Clustered => Distribution::Clustered,
        };
        let f = generate(&mut rng_from_seed(seed), dist, n, m, count)?;
        *slot = Box::into_raw(Box::new(SkFamily(f)));
        Ok(())
    })
}

/// # Safety
/// `f` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sk_family_free(f: *mut SkFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Universe size, uniformity and member count.
///
/// # Safety
/// `f` must be a live handle; each out pointer must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn sk_family_shape(f: *const SkFamily, n: *mut u32, m: *mut u32, len: *mut usize) -> SkStatus {
    guard(|| {
        let f = family(f)?;
        if let Some(n) = n.as_mut() {
            *n = f.n();
        }
        if let Some(m) = m.as_mut() {
            *m = f.m();
        }
        if let Some(len) = len.as_mut() {
            *len = f.len();
        }
        Ok(())
    })
}

/// Canonical text form; free with [`sk_string_free`].
///
/// # Safety
/// `f` must be a live handle and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_family_to_text(f: *const SkFamily, out_text: *mut *mut c_char) -> SkStatus {
    guard(|| {
        let slot = out(out_text, "out_text")?;
        *slot = to_c_string(write_family(family(f)?)?)?;
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of `l`-sets containing at least one member.
///
/// # Safety
/// `f` must be a live handle and `out_count` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_ext_count(f: *const SkFamily, l: u32, out_count: *mut u64) -> SkStatus {
    guard(|| {
        let slot = out(out_count, "out_count")?;
        *slot = ext_count(family(f)?, l)?;
        Ok(())
    })
}

/// Set condition at `b = b_num / b_den`; `weighted` selects the weighted form.
///
/// # Safety
/// `f` must be a live handle and `out_holds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_gamma_check(f: *const SkFamily, b_num: i64, b_den: i64, weighted: bool, out_holds: *mut SkHolds) -> SkStatus {
    guard(|| {
        let slot = out(out_holds, "out_holds")?;
        let (f, b) = (family(f)?, ratio(b_num, b_den)?);
        let r = if weighted { gamma_weighted_check(f, &b)? } else { gamma_unit_check(f, &b)? };
        *slot = holds_of(r.holds);
        Ok(())
    })
}

/// Exact split identity for `j` disjoint blocks of size `d`.
///
/// # Safety
/// `f` must be a live handle and `out_holds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sk_split_check(f: *const SkFamily, d: u32, j: u32, out_holds: *mut SkHolds) -> SkStatus {
    guard(|| {
        let slot = out(out_holds, "out_holds")?;
        *slot = holds_of(split1_identity_check(family(f)?, d, j)?.holds);
        Ok(())
    })
}

/// Sunflower search with `k` petals; writes the JSON report (free with
/// [`sk_string_free`]) and its verdict. Exceeding `budget` search nodes
/// returns `BudgetExceeded`.
///
/// # Safety
/// `f` must be a live handle; `out_holds` and `out_json` must be valid or NULL.
#[no_mangle]
pub unsafe extern "C" fn sk_sunflower(
    f: *const SkFamily,
    k: usize,
    budget: u64,
    out_holds: *mut SkHolds,
    out_json: *mut *mut c_char,
) -> SkStatus {
    guard(|| {
        let r = sunflower_report(family(f)?, k, budget)?;
        if let Some(h) = out_holds.as_mut() {
            *h = holds_of(r.holds);
        }
        if let Some(j) = out_json.as_mut() {
            *j = report_json(&r)?;
        }
        Ok(())
    })
}
