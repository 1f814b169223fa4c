//! C ABI for the gvks solver.
//!
//! Instances and packings cross the boundary as opaque handles owned by the
//! caller and released with the matching `*_free` function. Every function
//! returns a [`GvksStatus`]; on failure [`gvks_last_error`] describes what went
//! wrong on the calling thread. Strings handed out by the library are released
//! with [`gvks_string_free`]. Panics never unwind into C.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gvks::io::{parse_instance, parse_packing, to_json};
use gvks::model::validate_packing;
use gvks::oracle::{exact_gvks_small, OracleBudget};
use gvks::solver::solve_gvks;
use gvks::{Error, KnapsackInstance, Packing, SolverParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GvksStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    Contract = 5,
    Budget = 6,
    Panic = 7,
}

/// Solver parameters. Zero in `config_budget` or `x_max` means "no cap".
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GvksParams {
    pub eps: f64,
    pub eps_struct: f64,
    pub eps_cont: f64,
    pub eps_prime: f64,
    pub c_max: usize,
    pub sum_depth: usize,
    pub config_budget: usize,
    pub x_max: usize,
}

impl From<GvksParams> for SolverParams {
    fn from(p: GvksParams) -> Self {
        SolverParams {
            eps: p.eps,
            eps_struct: p.eps_struct,
            eps_cont: p.eps_cont,
            eps_prime: p.eps_prime,
            c_max: p.c_max,
            sum_depth: p.sum_depth,
            config_budget: (p.config_budget > 0).then_some(p.config_budget),
            x_max: (p.x_max > 0).then_some(p.x_max),
        }
    }
}

/// One placed item. `id` stays valid while the owning packing is alive.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GvksPlacement {
    pub id: *const c_char,
    pub x: f64,
    pub y: f64,
    pub rotated: bool,
}

/// Opaque instance handle.
pub struct GvksInstance {
    inner: KnapsackInstance,
}

/// Opaque packing handle.
pub struct GvksPacking {
    inner: Packing,
    ids: Vec<CString>,
}

impl GvksPacking {
    fn new(inner: Packing) -> Self {
        // Ids come from parsed JSON strings, which cannot hold NUL.
        let ids = inner.placements.iter().map(|p| CString::new(p.id.replace('\0', "")).expect("NUL removed")).collect();
        GvksPacking { inner, ids }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: GvksStatus, msg: &str) -> GvksStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> GvksStatus {
    match e {
        Error::Parse { .. } => GvksStatus::ParseError,
        Error::Contract(_) => GvksStatus::Contract,
        Error::Budget { .. } => GvksStatus::Budget,
        _ => GvksStatus::InvalidInput,
    }
}

fn guarded(body: impl FnOnce() -> Result<(), GvksStatus>) -> GvksStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GvksStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(GvksStatus::Panic, "internal panic"),
    }
}

fn check(e: Error) -> GvksStatus {
    fail(status_of(&e), &e.to_string())
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, GvksStatus> {
    if s.is_null() {
        return Err(fail(GvksStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(GvksStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, GvksStatus> {
    p.as_ref().ok_or_else(|| fail(GvksStatus::NullPointer, &format!("null {what}")))
}

fn out_ptr<T>(out: *mut *mut T) -> Result<(), GvksStatus> {
    if out.is_null() {
        Err(fail(GvksStatus::NullPointer, "null output pointer"))
    } else {
        Ok(())
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn gvks_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses an instance from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gvks_instance_from_json(json: *const c_char, out: *mut *mut GvksInstance) -> GvksStatus {
    guarded(|| {
        out_ptr(out)?;
        let text = read_str(json)?;
        let inner = parse_instance(text).map_err(check)?;
        *out = Box::into_raw(Box::new(GvksInstance { inner }));
        Ok(())
    })
}

/// # Safety
/// `instance` must come from [`gvks_instance_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gvks_instance_free(instance: *mut GvksInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Number of items; 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gvks_instance_len(instance: *const GvksInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.len())
}

#[no_mangle]
pub extern "C" fn gvks_params_default() -> GvksParams {
    let p = SolverParams::default();
    GvksParams {
        eps: p.eps,
        eps_struct: p.eps_struct,
        eps_cont: p.eps_cont,
        eps_prime: p.eps_prime,
        c_max: p.c_max,
        sum_depth: p.sum_depth,
        config_budget: p.config_budget.unwrap_or(0),
        x_max: p.x_max.unwrap_or(0),
    }
}

/// Runs the approximation solver. A null `params` means defaults.
///
/// # Safety
/// `instance` must be a live handle, `params` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvks_solve(
    instance: *const GvksInstance,
    params: *const GvksParams,
    out: *mut *mut GvksPacking,
) -> GvksStatus {
    guarded(|| {
        out_ptr(out)?;
        let inst = deref(instance, "instance")?;
        let params: SolverParams = params.as_ref().map_or_else(SolverParams::default, |p| (*p).into());
        let packing = solve_gvks(&inst.inner, &params).map_err(check)?;
        *out = Box::into_raw(Box::new(GvksPacking::new(packing)));
        Ok(())
    })
}

/// Solves exactly; refuses instances beyond the oracle's default budget.
///
/// # Safety
/// `instance` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvks_oracle_solve(instance: *const GvksInstance, out: *mut *mut GvksPacking) -> GvksStatus {
    guarded(|| {
        out_ptr(out)?;
        let inst = deref(instance, "instance")?;
        let result = exact_gvks_small(&inst.inner, &OracleBudget::default()).map_err(check)?;
        *out = Box::into_raw(Box::new(GvksPacking::new(result.witness)));
        Ok(())
    })
}

/// Parses a packing from JSON.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gvks_packing_from_json(json: *const c_char, out: *mut *mut GvksPacking) -> GvksStatus {
    guarded(|| {
        out_ptr(out)?;
        let text = read_str(json)?;
        let inner = parse_packing(text).map_err(check)?;
        *out = Box::into_raw(Box::new(GvksPacking::new(inner)));
        Ok(())
    })
}

/// # Safety
/// `packing` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gvks_packing_free(packing: *mut GvksPacking) {
    if !packing.is_null() {
        drop(Box::from_raw(packing));
    }
}

/// Reported profit; 0 for a null handle.
///
/// # Safety
/// `packing` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gvks_packing_profit(packing: *const GvksPacking) -> f64 {
    packing.as_ref().map_or(0.0, |p| p.inner.packed_profit)
}

/// Number of placements; 0 for a null handle.
///
/// # Safety
/// `packing` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gvks_packing_len(packing: *const GvksPacking) -> usize {
    packing.as_ref().map_or(0, |p| p.inner.placements.len())
}

/// Copies placement `index` into `out`.
///
/// # Safety
/// `packing` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvks_packing_get(packing: *const GvksPacking, index: usize, out: *mut GvksPlacement) -> GvksStatus {
    guarded(|| {
        let p = deref(packing, "packing")?;
        if out.is_null() {
            return Err(fail(GvksStatus::NullPointer, "null output pointer"));
        }
        let Some(pl) = p.inner.placements.get(index) else {
            return Err(fail(GvksStatus::InvalidInput, &format!("index {index} out of range")));
        };
        *out = GvksPlacement { id: p.ids[index].as_ptr(), x: pl.x, y: pl.y, rotated: pl.rotated };
        Ok(())
    })
}

/// Serializes a packing; release the string with [`gvks_string_free`].
///
/// # Safety
/// `packing` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gvks_packing_to_json(packing: *const GvksPacking, out: *mut *mut c_char) -> GvksStatus {
    guarded(|| {
        out_ptr(out)?;
        let p = deref(packing, "packing")?;
        let text = CString::new(to_json(&p.inner)).map_err(|_| fail(GvksStatus::InvalidInput, "NUL in output"))?;
        *out = text.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn gvks_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Counts the violations of `packing` against `instance` into `violations`;
/// their descriptions, one per line, go to [`gvks_last_error`].
///
/// # Safety
/// Both handles must be live and `violations` writable.
#[no_mangle]
pub unsafe extern "C" fn gvks_validate(
    instance: *const GvksInstance,
    packing: *const GvksPacking,
    violations: *mut usize,
) -> GvksStatus {
    guarded(|| {
        let inst = deref(instance, "instance")?;
        let p = deref(packing, "packing")?;
        if violations.is_null() {
            return Err(fail(GvksStatus::NullPointer, "null output pointer"));
        }
        let report = validate_packing(&p.inner, &inst.inner).map_err(check)?;
        *violations = report.violations.len();
        let listing: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        set_error(&listing.join("\n"));
        Ok(())
    })
}
