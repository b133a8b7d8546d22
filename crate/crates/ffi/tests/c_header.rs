//! Compiles and runs a small C program against the generated header and
//! the static library. Skipped when no C compiler is on PATH.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "plasmon_ffi.h"

int main(void) {
    PlasmonFilm *film = NULL;
    PlasmonComplex g0 = {0.0, 0.0};
    if (plasmon_film_new(0.5, 0.0, PLASMON_G_MODEL_ZERO, g0, &film) != PLASMON_STATUS_OK) return 1;
    PlasmonPoint p;
    if (plasmon_solve_point(film, 0.5, NULL, NULL, &p) != PLASMON_STATUS_OK) return 2;
    if (!p.converged || fabs(p.omega.re - plasmon_closed_form_lowfreq(0.5, 0.5)) > 1e-10) return 3;
    if (plasmon_film_new(-1.0, 0.0, PLASMON_G_MODEL_ZERO, g0, NULL) != PLASMON_STATUS_NULL_POINTER) return 4;
    PlasmonFilm *bad = NULL;
    if (plasmon_film_new(-1.0, 0.0, PLASMON_G_MODEL_ZERO, g0, &bad) != PLASMON_STATUS_DOMAIN) return 5;
    if (plasmon_last_error_message() == NULL) return 6;
    PlasmonSweep *sweep = NULL;
    if (plasmon_sweep_run(film, 0.1, 1.0, 5, PLASMON_GRID_LOG, NULL, false, &sweep) != PLASMON_STATUS_OK) return 7;
    if (plasmon_sweep_len(sweep) != 5) return 8;
    char *csv = NULL;
    if (plasmon_sweep_to_csv(sweep, &csv) != PLASMON_STATUS_OK) return 9;
    fputs(csv, stdout);
    plasmon_string_free(csv);
    plasmon_sweep_free(sweep);
    plasmon_film_free(film);
    return 0;
}
"#;

fn compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"].into_iter().find(|c| {
        Command::new(c)
            .arg("--version")
            .output()
            .is_ok_and(|o| o.status.success())
    })
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_is_current() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/plasmon_ffi.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "plasmon_solve_point",
        "plasmon_sweep_run",
        "plasmon_last_error_message",
        "PLASMON_STATUS_PANIC",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let lib = target_dir().join("libplasmon_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);
}
