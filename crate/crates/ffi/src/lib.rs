//! C ABI over the usc-array simulator.
//!
//! Every fallible call returns a `UscStatus`; on failure the message is kept
//! in a thread-local slot readable through `usc_last_error`. Systems are
//! opaque handles created by `usc_system_new` and released by
//! `usc_system_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use usc_array::dynamics::rabi_period;
use usc_array::fock::eigenvalues_hermitian;
use usc_array::model::{build_hamiltonian, Basis, SystemParams};
use usc_array::scenario::{list_scenarios, load, run_scenario, write_outputs, RunOptions};
use usc_array::spectrum::{find_min_gap_with, GapSearch};
use usc_array::Error;

/// Opaque system handle.
pub struct UscSystem {
    params: SystemParams,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Validation = 3,
    Unsupported = 4,
    Bracketing = 5,
    Convergence = 6,
    Io = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UscBasis {
    Bare = 0,
    Supermode = 1,
}

impl From<UscBasis> for Basis {
    fn from(b: UscBasis) -> Self {
        match b {
            UscBasis::Bare => Basis::Bare,
            UscBasis::Supermode => Basis::Supermode,
        }
    }
}

/// Result of a minimum-gap search.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UscGap {
    pub omega_q_star: f64,
    pub gap_min: f64,
    pub omega_eff: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> UscStatus {
    match e {
        Error::Validation(_) => UscStatus::Validation,
        Error::UnsupportedParameter { .. } => UscStatus::Unsupported,
        Error::Bracketing(_) => UscStatus::Bracketing,
        Error::Convergence(_) | Error::StepSize { .. } => UscStatus::Convergence,
        Error::Io { .. } => UscStatus::Io,
        Error::Config(_) | Error::Type(_) | Error::Range(_) | Error::Parse(_) => UscStatus::InvalidArgument,
        Error::Contract(_) => UscStatus::Internal,
    }
}

/// Run `f`, translating errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), (UscStatus, String)>) -> UscStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UscStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            UscStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (UscStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (UscStatus, String) {
    (UscStatus::NullPointer, format!("{what} is null"))
}

unsafe fn system_mut<'a>(sys: *mut UscSystem) -> Result<&'a mut UscSystem, (UscStatus, String)> {
    sys.as_mut().ok_or_else(|| null("system"))
}

unsafe fn system_ref<'a>(sys: *const UscSystem) -> Result<&'a UscSystem, (UscStatus, String)> {
    sys.as_ref().ok_or_else(|| null("system"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, (UscStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (UscStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn usc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version string (static).
#[no_mangle]
pub extern "C" fn usc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New system with default parameters for `n_cavities` (2 or 3); NULL on
/// bad input.
#[no_mangle]
pub extern "C" fn usc_system_new(n_cavities: u32) -> *mut UscSystem {
    clear_error();
    let params = match n_cavities {
        2 => SystemParams::two_cavity(),
        3 => SystemParams::three_cavity(0.0),
        n => {
            set_error(format!("n_cavities must be 2 or 3, got {n}"));
            return ptr::null_mut();
        }
    };
    Box::into_raw(Box::new(UscSystem { params }))
}

/// # Safety
/// `sys` must come from `usc_system_new` and not be freed twice. NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn usc_system_free(sys: *mut UscSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Apply a parameter change, rejecting it (and keeping the old value) when the
/// result fails validation.
unsafe fn update(sys: *mut UscSystem, f: impl FnOnce(&mut SystemParams)) -> UscStatus {
    guard(|| {
        let s = system_mut(sys)?;
        let mut next = s.params.clone();
        f(&mut next);
        next.validate().map_err(lib_err)?;
        s.params = next;
        Ok(())
    })
}

/// Both qubits at `omega_q`.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn usc_system_set_qubit_frequency(sys: *mut UscSystem, omega_q: f64) -> UscStatus {
    update(sys, |p| p.omega_q = [omega_q, omega_q])
}

/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn usc_system_set_coupling(sys: *mut UscSystem, g_abs: f64) -> UscStatus {
    update(sys, |p| p.g_abs = g_abs)
}

/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn usc_system_set_hopping(sys: *mut UscSystem, hopping: f64) -> UscStatus {
    update(sys, |p| p.hopping = hopping)
}

/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn usc_system_set_theta(sys: *mut UscSystem, theta: f64) -> UscStatus {
    update(sys, |p| p.theta = theta)
}

/// Coupling phases; each must be 0 or pi.
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn usc_system_set_phases(sys: *mut UscSystem, phi1: f64, phi2: f64) -> UscStatus {
    update(sys, |p| p.phases = [phi1, phi2])
}

/// Central-cavity detuning (three-cavity systems).
///
/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn usc_system_set_delta(sys: *mut UscSystem, delta: f64) -> UscStatus {
    update(sys, |p| p.delta = delta)
}

/// # Safety
/// `sys` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn usc_system_set_n_max(sys: *mut UscSystem, n_max: u32) -> UscStatus {
    update(sys, |p| p.n_max = n_max as usize)
}

/// Lowest `n_levels` eigenfrequencies relative to the ground state, written
/// to `out[0..n_levels]`.
///
/// # Safety
/// `sys` must be a live handle and `out` must hold `n_levels` doubles.
#[no_mangle]
pub unsafe extern "C" fn usc_spectrum_levels(
    sys: *const UscSystem,
    basis: UscBasis,
    n_levels: usize,
    out: *mut f64,
) -> UscStatus {
    guard(|| {
        let s = system_ref(sys)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let h = build_hamiltonian(&s.params, basis.into()).map_err(lib_err)?;
        if n_levels > h.dim() {
            return Err((UscStatus::BufferTooSmall, format!("{n_levels} levels requested from dim {}", h.dim())));
        }
        let e = eigenvalues_hermitian(&h).map_err(lib_err)?;
        let dst = std::slice::from_raw_parts_mut(out, n_levels);
        for (d, x) in dst.iter_mut().zip(&e) {
            *d = x - e[0];
        }
        Ok(())
    })
}

/// Minimum of the gap between levels `level_i < level_j` over qubit
/// frequencies in [`lo`, `hi`], using `points` coarse samples (0 = default).
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn usc_find_min_gap(
    sys: *const UscSystem,
    level_i: usize,
    level_j: usize,
    lo: f64,
    hi: f64,
    points: usize,
    out: *mut UscGap,
) -> UscStatus {
    guard(|| {
        let s = system_ref(sys)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let mut search = GapSearch::default();
        if points > 0 {
            search.coarse_points = points;
        }
        let ac = find_min_gap_with(&s.params, (level_i, level_j), (lo, hi), &search).map_err(lib_err)?;
        *out = UscGap { omega_q_star: ac.omega_q_star, gap_min: ac.gap_min, omega_eff: ac.omega_eff };
        Ok(())
    })
}

/// Vacuum Rabi period pi / (2 omega_eff).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn usc_rabi_period(omega_eff: f64, out: *mut f64) -> UscStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = rabi_period(omega_eff).map_err(lib_err)?;
        Ok(())
    })
}

/// Run a config file or canonical scenario id, writing outputs under
/// `out_dir` in the format the config asks for.
///
/// # Safety
/// `target` and `out_dir` must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn usc_run_scenario(
    target: *const c_char,
    out_dir: *const c_char,
    deterministic: bool,
) -> UscStatus {
    guard(|| {
        let target = str_arg(target, "target")?;
        let dir = str_arg(out_dir, "out_dir")?;
        let cfg = load(target).map_err(lib_err)?;
        let opts = RunOptions { n_max: None, deterministic };
        let output = run_scenario(&cfg, &opts).map_err(lib_err)?;
        write_outputs(&output, Path::new(dir), &cfg.output_path, cfg.format).map_err(lib_err)?;
        Ok(())
    })
}

/// Newline-separated canonical scenario ids. Release with `usc_string_free`.
#[no_mangle]
pub extern "C" fn usc_scenario_ids() -> *mut c_char {
    let ids: Vec<&str> = list_scenarios().iter().map(|e| e.id).collect();
    CString::new(ids.join("\n")).map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must come from this library and not be freed twice. NULL is a no-op.
#[no_mangle]
pub unsafe extern "C" fn usc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
