use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "solvable.h"

int main(void) {
    SvFamily *f = NULL;
    if (sv_family_new("gho", &f) != SV_STATUS_OK) return 1;
    if (sv_family_set(f, "theta2", 1.0) != SV_STATUS_OK) return 2;
    double e[3];
    size_t n = 0;
    if (sv_analytic_spectrum(f, 3, e, 3, &n) != SV_STATUS_OK || n != 3) return 3;
    if (fabs(e[2] - 5.0) > 1e-12) return 4;
    if (sv_family_set(f, "alpha", 1.0) != SV_STATUS_UNKNOWN_PARAMETER) return 5;
    printf("%s\n", sv_last_error());
    sv_family_free(f);
    return 0;
}
"#;

/// `target/<profile>/deps` holds the library during `cargo test`; `target/<profile>` after a build.
fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    exe.ancestors().skip(1).take(2).map(|d| d.join("libsolvable_ffi.a")).find(|p| p.exists())
}

#[test]
fn c_program_links_against_the_static_library() {
    let Some(lib) = static_lib() else {
        eprintln!("skipping: static library not found");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let status = Command::new("cc")
        .args(["-std=c11", "-Wall", "-Werror", "-I", include])
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    assert!(String::from_utf8_lossy(&out.stdout).contains("alpha"));
}
