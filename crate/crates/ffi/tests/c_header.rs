//! Builds a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "pillowtile.h"

int main(void) {
    PtCover *c = NULL;
    if (pt_cover_cyclic(5, 1, 2, 2, 5, &c) != PT_STATUS_OK) return 10;
    if (pt_cover_genus(c) != 2) return 11;
    bool degenerate = false;
    if (pt_ekz_is_degenerate(c, 0, &degenerate) != PT_STATUS_OK || !degenerate) return 12;
    char *json = NULL;
    if (pt_ekz_json(c, 0, &json) != PT_STATUS_OK) return 13;
    printf("%s\n", json);
    pt_string_free(json);
    pt_cover_free(c);

    PtCover *bad = NULL;
    if (pt_cover_parse("not a cover", &bad) != PT_STATUS_PARSE) return 14;
    if (pt_last_error() == NULL) return 15;
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests live in <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|p| p.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libpillowtile_ffi.a");
    if !lib.exists() {
        // `cargo test` builds only the rlib; ask for the static library
        let status = Command::new(env!("CARGO"))
            .args(["build", "-p", "pillowtile-ffi", "--lib"])
            .args(if target_dir().ends_with("release") { &["--release"][..] } else { &[][..] })
            .current_dir(&manifest)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("main.c");
    let exe = tmp.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("\"lyap_sum\":\"0/1\""), "{stdout}");
}
