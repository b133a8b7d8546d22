//! C ABI for `plasmon-core`.
//!
//! Every fallible function returns a [`PlasmonStatus`] and writes results
//! through out-pointers. On failure, [`plasmon_last_error_message`] describes
//! the most recent error on the calling thread. Handles are opaque and must
//! be released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use plasmon_core::num_complex::Complex64;
use plasmon_core::output::{sweep_csv, sweep_json, Layout};
use plasmon_core::{
    alpha, closed_form_lowfreq, load_g_table, residual, smallk_expansion, solve_point,
    sweep_dispersion, tmm_solve, DispersionPoint, Error, FilmParams, GModel, Grid, RootConfig,
    SweepRequest, SweepResult,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlasmonStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Singularity = 4,
    Range = 5,
    Parse = 6,
    /// Output was written but the solver did not meet its tolerance.
    NotConverged = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlasmonComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for PlasmonComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<PlasmonComplex> for Complex64 {
    fn from(z: PlasmonComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlasmonGModel {
    Zero = 0,
    Constant = 1,
    Drude = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlasmonGrid {
    Linear = 0,
    Log = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmonRootConfig {
    pub tol_residual: f64,
    pub max_iter: u32,
    pub fd_step_rel: f64,
    pub damping_halvings: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlasmonPoint {
    pub k: f64,
    pub omega: PlasmonComplex,
    pub alpha: PlasmonComplex,
    pub g: PlasmonComplex,
    pub residual_abs: f64,
    pub iterations: u32,
    pub converged: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlasmonSlabMode {
    pub k: f64,
    pub omega: PlasmonComplex,
    pub kappa_out: PlasmonComplex,
    pub kappa_in: PlasmonComplex,
    pub residual_abs: f64,
    pub iterations: u32,
}

/// Film description. Create with `plasmon_film_new*`.
pub struct PlasmonFilm(FilmParams);

/// Completed sweep. Create with `plasmon_sweep_run`.
pub struct PlasmonSweep(SweepResult);

impl From<&PlasmonRootConfig> for RootConfig {
    fn from(c: &PlasmonRootConfig) -> Self {
        RootConfig {
            tol_residual: c.tol_residual,
            max_iter: c.max_iter as usize,
            fd_step_rel: c.fd_step_rel,
            damping_halvings: c.damping_halvings as usize,
            ..RootConfig::default()
        }
    }
}

impl From<&DispersionPoint> for PlasmonPoint {
    fn from(p: &DispersionPoint) -> Self {
        Self {
            k: p.k,
            omega: p.omega.into(),
            alpha: p.alpha.into(),
            g: p.g.into(),
            residual_abs: p.residual_abs,
            iterations: p.iterations as u32,
            converged: p.converged,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

enum Failure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn status_of(e: &Error) -> PlasmonStatus {
    match e {
        Error::Domain(_) => PlasmonStatus::Domain,
        Error::Pole(_) | Error::Singularity(_) | Error::SingularJacobian(_) => {
            PlasmonStatus::Singularity
        }
        Error::Range { .. } => PlasmonStatus::Range,
        Error::Parse { .. } => PlasmonStatus::Parse,
        Error::Bracket { .. } | Error::NotConverged(_) | Error::EmptySweep(_) => {
            PlasmonStatus::NotConverged
        }
        Error::Io(_) => PlasmonStatus::Io,
        Error::State(_) | Error::Validation(_) => PlasmonStatus::InvalidArgument,
    }
}

fn guard<F>(f: F) -> PlasmonStatus
where
    F: FnOnce() -> Result<PlasmonStatus, Failure>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("{what} is null"));
            PlasmonStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PlasmonStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn deref_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn root_config(cfg: *const PlasmonRootConfig) -> RootConfig {
    cfg.as_ref()
        .map_or_else(RootConfig::default, RootConfig::from)
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn plasmon_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn plasmon_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn plasmon_root_config_default() -> PlasmonRootConfig {
    let d = RootConfig::default();
    PlasmonRootConfig {
        tol_residual: d.tol_residual,
        max_iter: d.max_iter as u32,
        fd_step_rel: d.fd_step_rel,
        damping_halvings: d.damping_halvings as u32,
    }
}

/// Creates a film. `g0` is used only by the constant model.
///
/// # Safety
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn plasmon_film_new(
    thickness: f64,
    collision_rate: f64,
    model: PlasmonGModel,
    g0: PlasmonComplex,
    out: *mut *mut PlasmonFilm,
) -> PlasmonStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        *out = ptr::null_mut();
        let g_model = match model {
            PlasmonGModel::Zero => GModel::Zero,
            PlasmonGModel::Constant => GModel::constant(g0.into())?,
            PlasmonGModel::Drude => GModel::Drude,
        };
        let film = FilmParams::new(thickness, collision_rate, g_model)?;
        *out = Box::into_raw(Box::new(PlasmonFilm(film)));
        Ok(PlasmonStatus::Ok)
    })
}

/// Creates a film whose G is read from a CSV table (`omega,g_re,g_im`).
///
/// # Safety
/// `path` must be null or a NUL-terminated string; `out` as for
/// [`plasmon_film_new`].
#[no_mangle]
pub unsafe extern "C" fn plasmon_film_new_with_table(
    thickness: f64,
    collision_rate: f64,
    path: *const c_char,
    out: *mut *mut PlasmonFilm,
) -> PlasmonStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        *out = ptr::null_mut();
        if path.is_null() {
            return Err(Failure::Null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Error::Validation("path is not valid UTF-8".into()))?;
        let film = FilmParams::new(thickness, collision_rate, load_g_table(path)?)?;
        *out = Box::into_raw(Box::new(PlasmonFilm(film)));
        Ok(PlasmonStatus::Ok)
    })
}

/// # Safety
/// `film` must be null or a handle from `plasmon_film_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn plasmon_film_free(film: *mut PlasmonFilm) {
    if !film.is_null() {
        drop(Box::from_raw(film));
    }
}

/// Dispersion residual `F(Ω)` at wavevector `k`.
///
/// # Safety
/// `film` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plasmon_residual(
    film: *const PlasmonFilm,
    k: f64,
    omega: PlasmonComplex,
    out: *mut PlasmonComplex,
) -> PlasmonStatus {
    guard(|| {
        let film = deref(film, "film")?;
        let out = deref_mut(out, "out")?;
        *out = residual(omega.into(), k, &film.0)?.into();
        Ok(PlasmonStatus::Ok)
    })
}

/// Solves for the mode at `k`. `seed` and `cfg` may be null for defaults.
/// Returns `NOT_CONVERGED` with `out` filled when the tolerance was missed.
///
/// # Safety
/// `film` must be a live handle; `seed` and `cfg` null or valid; `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn plasmon_solve_point(
    film: *const PlasmonFilm,
    k: f64,
    seed: *const PlasmonComplex,
    cfg: *const PlasmonRootConfig,
    out: *mut PlasmonPoint,
) -> PlasmonStatus {
    guard(|| {
        let film = deref(film, "film")?;
        let out = deref_mut(out, "out")?;
        let seed = seed.as_ref().map(|s| Complex64::from(*s));
        let p = solve_point(k, &film.0, seed, &root_config(cfg))?;
        *out = PlasmonPoint::from(&p);
        if p.converged {
            Ok(PlasmonStatus::Ok)
        } else {
            set_last_error(format!(
                "not converged at k = {k}: |F| = {:e}",
                p.residual_abs
            ));
            Ok(PlasmonStatus::NotConverged)
        }
    })
}

/// Exact slab mode of a Drude film near `seed`.
///
/// # Safety
/// `cfg` null or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn plasmon_tmm_solve(
    k: f64,
    thickness: f64,
    collision_rate: f64,
    seed: PlasmonComplex,
    cfg: *const PlasmonRootConfig,
    out: *mut PlasmonSlabMode,
) -> PlasmonStatus {
    guard(|| {
        let out = deref_mut(out, "out")?;
        let m = tmm_solve(k, thickness, collision_rate, seed.into(), &root_config(cfg))?;
        *out = PlasmonSlabMode {
            k: m.k,
            omega: m.omega.into(),
            kappa_out: m.kappa_out.into(),
            kappa_in: m.kappa_in.into(),
            residual_abs: m.residual_abs,
            iterations: m.iterations as u32,
        };
        Ok(PlasmonStatus::Ok)
    })
}

/// Decay constant `√(K² − Ω²)` with non-negative real part.
#[no_mangle]
pub extern "C" fn plasmon_alpha(k: f64, omega: PlasmonComplex) -> PlasmonComplex {
    alpha(k, omega.into()).into()
}

/// `2K/√(4 + K²D²)`.
#[no_mangle]
pub extern "C" fn plasmon_closed_form_lowfreq(k: f64, thickness: f64) -> f64 {
    closed_form_lowfreq(k, thickness)
}

/// `K(1 − K²D²/8)`.
#[no_mangle]
pub extern "C" fn plasmon_smallk_expansion(k: f64, thickness: f64) -> f64 {
    smallk_expansion(k, thickness)
}

/// Runs a sweep. A handle is produced whenever the request is valid; the
/// status is `NOT_CONVERGED` if any grid point failed.
///
/// # Safety
/// `film` must be a live handle; `cfg` null or valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn plasmon_sweep_run(
    film: *const PlasmonFilm,
    k_min: f64,
    k_max: f64,
    n_points: usize,
    grid: PlasmonGrid,
    cfg: *const PlasmonRootConfig,
    compare_tmm: bool,
    out: *mut *mut PlasmonSweep,
) -> PlasmonStatus {
    guard(|| {
        let film = deref(film, "film")?;
        let out = deref_mut(out, "out")?;
        *out = ptr::null_mut();
        let req = SweepRequest {
            k_min,
            k_max,
            n_points,
            grid: match grid {
                PlasmonGrid::Linear => Grid::Linear,
                PlasmonGrid::Log => Grid::Log,
            },
            film: film.0.clone(),
            cfg: root_config(cfg),
            compare_tmm,
        };
        let result = match sweep_dispersion(&req) {
            Ok(r) => r,
            Err(Error::EmptySweep(reasons)) => SweepResult::all_failed(&req, reasons),
            Err(e) => return Err(e.into()),
        };
        let status = if result.failures.is_empty() {
            PlasmonStatus::Ok
        } else {
            set_last_error(format!(
                "{} of {n_points} points failed",
                result.failures.len()
            ));
            PlasmonStatus::NotConverged
        };
        *out = Box::into_raw(Box::new(PlasmonSweep(result)));
        Ok(status)
    })
}

/// Number of converged points. Returns 0 for a null handle.
///
/// # Safety
/// `sweep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plasmon_sweep_len(sweep: *const PlasmonSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.0.points.len())
}

/// Number of grid points that failed. Returns 0 for a null handle.
///
/// # Safety
/// `sweep` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plasmon_sweep_failure_count(sweep: *const PlasmonSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.0.failures.len())
}

/// Converged point `index`, in ascending `k`.
///
/// # Safety
/// `sweep` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn plasmon_sweep_point(
    sweep: *const PlasmonSweep,
    index: usize,
    out: *mut PlasmonPoint,
) -> PlasmonStatus {
    guard(|| {
        let sweep = deref(sweep, "sweep")?;
        let out = deref_mut(out, "out")?;
        let p = sweep.0.points.get(index).ok_or(Error::Range {
            value: index as f64,
            lo: 0.0,
            hi: sweep.0.points.len() as f64,
        })?;
        *out = p.into();
        Ok(PlasmonStatus::Ok)
    })
}

/// Wavevector of failed grid point `index`.
///
/// # Safety
/// `sweep` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn plasmon_sweep_failure_k(
    sweep: *const PlasmonSweep,
    index: usize,
    out: *mut f64,
) -> PlasmonStatus {
    guard(|| {
        let sweep = deref(sweep, "sweep")?;
        let out = deref_mut(out, "out")?;
        let f = sweep.0.failures.get(index).ok_or(Error::Range {
            value: index as f64,
            lo: 0.0,
            hi: sweep.0.failures.len() as f64,
        })?;
        *out = f.k;
        Ok(PlasmonStatus::Ok)
    })
}

unsafe fn export_string(bytes: Vec<u8>, out: *mut *mut c_char) -> Result<PlasmonStatus, Failure> {
    let out = deref_mut(out, "out")?;
    let s = CString::new(bytes).map_err(|_| Error::Io("output contains NUL".into()))?;
    *out = s.into_raw();
    Ok(PlasmonStatus::Ok)
}

fn layout(sweep: &PlasmonSweep) -> Layout {
    Layout {
        compare_tmm: sweep.0.tmm_points.is_some(),
        scaling: None,
    }
}

/// Renders the sweep as CSV. Release the string with `plasmon_string_free`.
///
/// # Safety
/// `sweep` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn plasmon_sweep_to_csv(
    sweep: *const PlasmonSweep,
    out: *mut *mut c_char,
) -> PlasmonStatus {
    guard(|| {
        let sweep = deref(sweep, "sweep")?;
        export_string(sweep_csv(&sweep.0, &layout(sweep))?, out)
    })
}

/// Renders the sweep as JSON. Release the string with `plasmon_string_free`.
///
/// # Safety
/// `sweep` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn plasmon_sweep_to_json(
    sweep: *const PlasmonSweep,
    out: *mut *mut c_char,
) -> PlasmonStatus {
    guard(|| {
        let sweep = deref(sweep, "sweep")?;
        export_string(sweep_json(&sweep.0, &layout(sweep))?, out)
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn plasmon_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `sweep` must be null or a handle from `plasmon_sweep_run` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn plasmon_sweep_free(sweep: *mut PlasmonSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}
