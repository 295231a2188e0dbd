//! C interface to `solvable`.
//!
//! Every call returns an [`SvStatus`]; on failure [`sv_last_error`] holds a
//! message for the calling thread. Handles are created by `*_new` / `sv_solve`
//! and released with the matching `*_free`.

// `!(a < b)` is used deliberately so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use solvable::catalog::{analytic_spectrum, family_potential, family_reduction, FamilyId, FamilyParams};
use solvable::specfun::{build_solution, uniform_grid, SolutionProfile};
use solvable::verify::family_spectrum;
use solvable::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    UnknownFamily = 3,
    UnknownParameter = 4,
    OutsideDomain = 5,
    Series = 6,
    Shooting = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

/// A family with its two parameters.
pub struct SvFamily {
    params: FamilyParams,
}

/// A wavefunction sampled on a uniform grid.
pub struct SvProfile {
    inner: SolutionProfile,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SvStatus {
    match e {
        Error::UnknownFamily(_) => SvStatus::UnknownFamily,
        Error::UnknownParameter { .. } => SvStatus::UnknownParameter,
        Error::OutsideDomain { .. } | Error::Pole { .. } => SvStatus::OutsideDomain,
        Error::SeriesDomain { .. } | Error::CPole { .. } | Error::NoConvergence { .. } => SvStatus::Series,
        Error::Shooting(_) => SvStatus::Shooting,
        _ => SvStatus::InvalidArgument,
    }
}

/// Runs `f`, turning errors and panics into a status plus a thread-local message.
fn guard(f: impl FnOnce() -> Result<(), (SvStatus, String)>) -> SvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SvStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SvStatus::Internal
        }
    }
}

fn lib(e: Error) -> (SvStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SvStatus, String) {
    (SvStatus::NullPointer, format!("{what} is null"))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SvStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (SvStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn params_of<'a>(f: *const SvFamily) -> Result<&'a FamilyParams, (SvStatus, String)> {
    f.as_ref().map(|f| &f.params).ok_or_else(|| null("family"))
}

/// Message for the last failed call on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Number of catalog families.
#[no_mangle]
pub extern "C" fn sv_family_count() -> usize {
    FamilyId::ALL.len()
}

/// Static, NUL-terminated id of family `index`, or null when out of range.
#[no_mangle]
pub extern "C" fn sv_family_name(index: usize) -> *const c_char {
    const NAMES: [&CStr; 10] = [
        c"pt_trig",
        c"pt_hyp",
        c"rosen",
        c"eckart",
        c"hydrogen",
        c"radial_osc",
        c"morse",
        c"gho",
        c"special_I",
        c"special_II",
    ];
    NAMES.get(index).map_or(ptr::null(), |s| s.as_ptr())
}

/// New family with both parameters zero.
///
/// # Safety
/// `id` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sv_family_new(id: *const c_char, out: *mut *mut SvFamily) -> SvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let id: FamilyId = c_str(id, "id")?.parse().map_err(lib)?;
        let params = FamilyParams::new(id, [0.0, 0.0]).map_err(lib)?;
        *out = Box::into_raw(Box::new(SvFamily { params }));
        Ok(())
    })
}

/// Sets a named parameter, e.g. `"alpha"` or `"theta2"`.
///
/// # Safety
/// `family` must come from [`sv_family_new`]; `name` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sv_family_set(family: *mut SvFamily, name: *const c_char, value: f64) -> SvStatus {
    guard(|| {
        let f = family.as_mut().ok_or_else(|| null("family"))?;
        let name = c_str(name, "name")?;
        let mut named: Vec<(&str, f64)> = f.params.id.param_names().into_iter().zip(f.params.values).collect();
        named.push((name, value));
        f.params = FamilyParams::from_named(f.params.id, named).map_err(lib)?;
        Ok(())
    })
}

/// # Safety
/// `family` must come from [`sv_family_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn sv_family_free(family: *mut SvFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// `V(r)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sv_potential(family: *const SvFamily, r: f64, out: *mut f64) -> SvStatus {
    guard(|| {
        let p = params_of(family)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = family_potential(p, r).map_err(lib)?;
        Ok(())
    })
}

/// Maximum relative mismatch of the reduction certificate at energy `e` and
/// whether it is within tolerance.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sv_certificate(
    family: *const SvFamily,
    e: f64,
    max_mismatch: *mut f64,
    passed: *mut bool,
) -> SvStatus {
    guard(|| {
        let p = params_of(family)?;
        if max_mismatch.is_null() || passed.is_null() {
            return Err(null("output"));
        }
        let c = family_reduction(p, e).map_err(lib)?;
        *max_mismatch = c.max_mismatch;
        *passed = c.passed;
        Ok(())
    })
}

unsafe fn fill(values: &[f64], out: *mut f64, capacity: usize, written: *mut usize) -> Result<(), (SvStatus, String)> {
    let written = written.as_mut().ok_or_else(|| null("written"))?;
    *written = values.len();
    if values.len() > capacity {
        return Err((SvStatus::BufferTooSmall, format!("need {} slots, have {capacity}", values.len())));
    }
    if !values.is_empty() {
        if out.is_null() {
            return Err(null("out"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
    Ok(())
}

/// Closed-form bound-state energies; at most `levels` are written to `out`
/// and their count to `written`.
///
/// # Safety
/// `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn sv_analytic_spectrum(
    family: *const SvFamily,
    levels: usize,
    out: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> SvStatus {
    guard(|| {
        let p = params_of(family)?;
        let e = analytic_spectrum(p, levels).map_err(lib)?;
        fill(&e, out, capacity, written)
    })
}

/// Numerically computed energies of the lowest `levels` bound states.
///
/// # Safety
/// `out` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn sv_shooting_spectrum(
    family: *const SvFamily,
    levels: usize,
    out: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> SvStatus {
    guard(|| {
        let p = params_of(family)?;
        let s = family_spectrum(p, levels).map_err(lib)?;
        fill(&s.energies(), out, capacity, written)
    })
}

/// Closed-form solution at energy `e` on `n` uniform points of `[lo, hi]`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sv_solve(
    family: *const SvFamily,
    e: f64,
    lo: f64,
    hi: f64,
    n: usize,
    out: *mut *mut SvProfile,
) -> SvStatus {
    guard(|| {
        let p = params_of(family)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if n < 2 || !(lo < hi) {
            return Err((SvStatus::InvalidArgument, "need n >= 2 and lo < hi".into()));
        }
        let inner = build_solution(p, e, &uniform_grid(lo, hi, n)).map_err(lib)?;
        *out = Box::into_raw(Box::new(SvProfile { inner }));
        Ok(())
    })
}

/// Number of grid points, 0 for a null handle.
///
/// # Safety
/// `profile` must come from [`sv_solve`] or be null.
#[no_mangle]
pub unsafe extern "C" fn sv_profile_len(profile: *const SvProfile) -> usize {
    profile.as_ref().map_or(0, |p| p.inner.grid.len())
}

/// Copies grid, real and imaginary parts; each buffer must hold `len` doubles.
///
/// # Safety
/// Buffers must hold at least `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sv_profile_values(
    profile: *const SvProfile,
    r: *mut f64,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> SvStatus {
    guard(|| {
        let p = &profile.as_ref().ok_or_else(|| null("profile"))?.inner;
        if len < p.grid.len() {
            return Err((SvStatus::BufferTooSmall, format!("need {} slots, have {len}", p.grid.len())));
        }
        if r.is_null() || re.is_null() || im.is_null() {
            return Err(null("output"));
        }
        for (k, (x, v)) in p.grid.iter().zip(&p.values).enumerate() {
            *r.add(k) = *x;
            *re.add(k) = v.re;
            *im.add(k) = v.im;
        }
        Ok(())
    })
}

/// # Safety
/// `profile` must come from [`sv_solve`] or be null.
#[no_mangle]
pub unsafe extern "C" fn sv_profile_free(profile: *mut SvProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}
