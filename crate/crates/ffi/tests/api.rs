use std::ffi::{CStr, CString};
use std::ptr;

use plasmon_ffi::*;

fn zero() -> PlasmonComplex {
    PlasmonComplex { re: 0.0, im: 0.0 }
}

fn film(d: f64, nu: f64, model: PlasmonGModel) -> *mut PlasmonFilm {
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { plasmon_film_new(d, nu, model, zero(), &mut f) },
        PlasmonStatus::Ok
    );
    assert!(!f.is_null());
    f
}

fn last_error() -> String {
    let p = plasmon_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn solve_matches_closed_form() {
    let f = film(0.5, 0.0, PlasmonGModel::Zero);
    let mut p = PlasmonPoint::default();
    let status = unsafe { plasmon_solve_point(f, 0.5, ptr::null(), ptr::null(), &mut p) };
    assert_eq!(status, PlasmonStatus::Ok);
    assert!(p.converged);
    let exact = plasmon_closed_form_lowfreq(0.5, 0.5);
    assert!((p.omega.re - exact).abs() <= 1e-10 * exact);
    assert!(plasmon_last_error_message().is_null());

    let mut r = zero();
    assert_eq!(
        unsafe { plasmon_residual(f, 0.5, p.omega, &mut r) },
        PlasmonStatus::Ok
    );
    assert!(r.re.hypot(r.im) <= 1e-12);
    unsafe { plasmon_film_free(f) };
}

#[test]
fn not_converged_still_fills_output() {
    let f = film(0.05, 0.01, PlasmonGModel::Drude);
    let cfg = PlasmonRootConfig {
        max_iter: 1,
        ..plasmon_root_config_default()
    };
    let mut p = PlasmonPoint::default();
    let status = unsafe { plasmon_solve_point(f, 0.2, ptr::null(), &cfg, &mut p) };
    assert_eq!(status, PlasmonStatus::NotConverged);
    assert!(!p.converged);
    assert_eq!(p.k, 0.2);
    assert!(last_error().contains("not converged"));
    unsafe { plasmon_film_free(f) };
}

#[test]
fn error_codes() {
    let mut f = ptr::null_mut();
    let s = unsafe { plasmon_film_new(-1.0, 0.0, PlasmonGModel::Zero, zero(), &mut f) };
    assert_eq!(s, PlasmonStatus::Domain);
    assert!(f.is_null());
    assert!(last_error().contains("thickness"));

    let s = unsafe { plasmon_film_new(0.1, 0.0, PlasmonGModel::Zero, zero(), ptr::null_mut()) };
    assert_eq!(s, PlasmonStatus::NullPointer);

    let mut p = PlasmonPoint::default();
    let s = unsafe { plasmon_solve_point(ptr::null(), 0.2, ptr::null(), ptr::null(), &mut p) };
    assert_eq!(s, PlasmonStatus::NullPointer);
    assert!(last_error().contains("film"));

    let missing = CString::new("/nonexistent/g.csv").unwrap();
    let s = unsafe { plasmon_film_new_with_table(0.1, 0.0, missing.as_ptr(), &mut f) };
    assert_eq!(s, PlasmonStatus::Io);
}

#[test]
fn table_film() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    std::fs::write(&path, "omega,g_re,g_im\n0.0,0.0,0.0\n1.0,0.0,0.0\n").unwrap();
    let cpath = CString::new(path.to_str().unwrap()).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { plasmon_film_new_with_table(0.5, 0.0, cpath.as_ptr(), &mut f) },
        PlasmonStatus::Ok
    );
    let mut p = PlasmonPoint::default();
    assert_eq!(
        unsafe { plasmon_solve_point(f, 0.5, ptr::null(), ptr::null(), &mut p) },
        PlasmonStatus::Ok
    );
    assert!((p.omega.re - plasmon_closed_form_lowfreq(0.5, 0.5)).abs() < 1e-10);
    unsafe { plasmon_film_free(f) };

    std::fs::write(&path, "omega,g_re\n0.0,0.0\n").unwrap();
    assert_eq!(
        unsafe { plasmon_film_new_with_table(0.5, 0.0, cpath.as_ptr(), &mut f) },
        PlasmonStatus::Parse
    );
}

#[test]
fn sweep_round_trip() {
    let f = film(0.05, 0.0, PlasmonGModel::Drude);
    let mut s = ptr::null_mut();
    let status = unsafe {
        plasmon_sweep_run(
            f,
            0.05,
            0.5,
            10,
            PlasmonGrid::Linear,
            ptr::null(),
            true,
            &mut s,
        )
    };
    assert_eq!(status, PlasmonStatus::Ok);
    assert_eq!(unsafe { plasmon_sweep_len(s) }, 10);
    assert_eq!(unsafe { plasmon_sweep_failure_count(s) }, 0);

    let mut p = PlasmonPoint::default();
    assert_eq!(
        unsafe { plasmon_sweep_point(s, 9, &mut p) },
        PlasmonStatus::Ok
    );
    assert_eq!(p.k, 0.5);
    assert_eq!(
        unsafe { plasmon_sweep_point(s, 10, &mut p) },
        PlasmonStatus::Range
    );

    let mut csv = ptr::null_mut();
    assert_eq!(
        unsafe { plasmon_sweep_to_csv(s, &mut csv) },
        PlasmonStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(csv) }.to_str().unwrap().to_string();
    assert_eq!(text.lines().count(), 11);
    assert!(text.lines().next().unwrap().ends_with("rel_diff"));
    unsafe { plasmon_string_free(csv) };

    let mut json = ptr::null_mut();
    assert_eq!(
        unsafe { plasmon_sweep_to_json(s, &mut json) },
        PlasmonStatus::Ok
    );
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap();
    assert!(text.contains("\"version\""));
    unsafe { plasmon_string_free(json) };

    unsafe {
        plasmon_sweep_free(s);
        plasmon_film_free(f);
    }
}

#[test]
fn sweep_rejects_bad_request() {
    let f = film(0.05, 0.0, PlasmonGModel::Drude);
    let mut s = ptr::null_mut();
    let status = unsafe {
        plasmon_sweep_run(
            f,
            0.5,
            0.1,
            10,
            PlasmonGrid::Log,
            ptr::null(),
            false,
            &mut s,
        )
    };
    assert_eq!(status, PlasmonStatus::InvalidArgument);
    assert!(s.is_null());
    unsafe { plasmon_film_free(f) };
}

#[test]
fn slab_oracle_and_helpers() {
    let mut m = PlasmonSlabMode::default();
    let seed = PlasmonComplex {
        re: 0.1999,
        im: 0.0,
    };
    assert_eq!(
        unsafe { plasmon_tmm_solve(0.2, 0.05, 0.0, seed, ptr::null(), &mut m) },
        PlasmonStatus::Ok
    );
    assert!(m.omega.re > 0.19 && m.omega.re < 0.2);

    let a = plasmon_alpha(0.5, PlasmonComplex { re: 0.3, im: 0.0 });
    assert!((a.re - 0.4).abs() < 1e-15 && a.im == 0.0);
    assert!((plasmon_smallk_expansion(0.1, 1.0) - 0.1 * (1.0 - 0.01 / 8.0)).abs() < 1e-16);
    let v = unsafe { CStr::from_ptr(plasmon_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn free_accepts_null() {
    unsafe {
        plasmon_film_free(ptr::null_mut());
        plasmon_sweep_free(ptr::null_mut());
        plasmon_string_free(ptr::null_mut());
        assert_eq!(plasmon_sweep_len(ptr::null()), 0);
    }
}
