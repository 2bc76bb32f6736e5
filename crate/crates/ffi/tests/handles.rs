use std::ffi::{c_char, CStr, CString};
use std::ptr;

use pillowtile_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { pt_string_free(p) };
    s
}

fn last_error() -> String {
    let p = pt_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn cyclic(n: u32, a: [u32; 4]) -> *mut PtCover {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pt_cover_cyclic(n, a[0], a[1], a[2], a[3], &mut out) }, PtStatus::Ok);
    out
}

#[test]
fn cover_report_and_exact_sum() {
    let c = cyclic(5, [1, 2, 2, 5]);
    assert_eq!(unsafe { pt_cover_degree(c) }, 5);
    assert_eq!(unsafe { pt_cover_genus(c) }, 2);

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pt_cover_report_json(c, &mut json) }, PtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["genus"], 2);

    let mut degenerate = false;
    assert_eq!(unsafe { pt_ekz_is_degenerate(c, 0, &mut degenerate) }, PtStatus::Ok);
    assert!(degenerate);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pt_ekz_json(c, 0, &mut json) }, PtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["lyap_sum"], "0/1");
    unsafe { pt_cover_free(c) };
}

#[test]
fn parse_errors_carry_codes_and_messages() {
    let mut out = ptr::null_mut();
    let bad = CString::new("5 1 2 x 5").unwrap();
    assert_eq!(unsafe { pt_cover_parse(bad.as_ptr(), &mut out) }, PtStatus::Parse);
    assert!(out.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(unsafe { pt_cover_cyclic(4, 2, 2, 2, 2, &mut out) }, PtStatus::InvalidInput);
    assert!(last_error().contains("cyclic datum"), "{}", last_error());

    assert_eq!(unsafe { pt_cover_parse(ptr::null(), &mut out) }, PtStatus::NullPointer);

    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { pt_cover_parse(invalid.as_ptr().cast(), &mut out) }, PtStatus::InvalidUtf8);

    let pillow = CString::new("2; (1 2); (1 2); (1 2); (1 2)").unwrap();
    assert_eq!(unsafe { pt_cover_parse(pillow.as_ptr(), &mut out) }, PtStatus::Ok);
    assert_eq!(unsafe { pt_cover_degree(out) }, 2);
    unsafe { pt_cover_free(out) };
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        pt_cover_free(ptr::null_mut());
        pt_estimate_free(ptr::null_mut());
        pt_certificate_free(ptr::null_mut());
        pt_bform_free(ptr::null_mut());
        pt_string_free(ptr::null_mut());
        assert_eq!(pt_cover_degree(ptr::null()), 0);
        assert!(pt_bform_max_entry(ptr::null()).is_nan());
        assert_eq!(pt_certificate_verdict(ptr::null()), PtVerdict::Contradiction);
        let mut json = ptr::null_mut();
        assert_eq!(pt_ekz_json(ptr::null(), 0, &mut json), PtStatus::NullPointer);
    }
    let v = unsafe { CStr::from_ptr(pt_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn lyapunov_buffers() {
    let c = cyclic(2, [1, 1, 1, 1]);
    let mut est = ptr::null_mut();
    assert_eq!(unsafe { pt_lyapunov_run(c, 20_000, 7, 20, 0, &mut est) }, PtStatus::Ok);
    let mut len = 0usize;
    assert_eq!(unsafe { pt_estimate_lambda_plus(est, ptr::null_mut(), 0, &mut len) }, PtStatus::NullPointer);
    assert_eq!(len, 1);
    let mut buf = [0.0f64; 4];
    assert_eq!(unsafe { pt_estimate_lambda_plus(est, buf.as_mut_ptr(), buf.len(), &mut len) }, PtStatus::Ok);
    assert!((buf[0] - 1.0).abs() < 0.05, "{buf:?}");

    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pt_estimate_json(est, &mut json) }, PtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["seed"], 7);
    unsafe { pt_estimate_free(est) };

    let mut est = ptr::null_mut();
    assert_eq!(unsafe { pt_lyapunov_run(c, 100, 7, 1, 0, &mut est) }, PtStatus::Precondition);
    unsafe { pt_cover_free(c) };
}

#[test]
fn buffer_too_small() {
    let c = cyclic(5, [1, 1, 4, 4]);
    let mut est = ptr::null_mut();
    assert_eq!(unsafe { pt_lyapunov_run(c, 2_000, 1, 10, 0, &mut est) }, PtStatus::Ok);
    let mut len = 0usize;
    let mut one = [0.0f64; 1];
    assert_eq!(unsafe { pt_estimate_lambda_plus(est, one.as_mut_ptr(), 1, &mut len) }, PtStatus::BufferTooSmall);
    assert!(len > 1);
    unsafe {
        pt_estimate_free(est);
        pt_cover_free(c);
    }
}

#[test]
fn certificates() {
    let c = cyclic(3, [1, 1, 1, 3]);
    let mut cert = ptr::null_mut();
    assert_eq!(unsafe { pt_certify(c, 0.02, 5_000, 3, &mut cert) }, PtStatus::Ok);
    assert_eq!(unsafe { pt_certificate_verdict(cert) }, PtVerdict::Pass);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pt_certificate_json(cert, &mut json) }, PtStatus::Ok);
    assert!(take_string(json).contains("\"PASS\""));
    unsafe { pt_certificate_free(cert) };

    let mut cert = ptr::null_mut();
    assert_eq!(unsafe { pt_certify(c, 0.5, 5_000, 3, &mut cert) }, PtStatus::Precondition);
    assert!(cert.is_null());
    unsafe { pt_cover_free(c) };

    let torus = cyclic(2, [1, 1, 1, 1]);
    let mut cert = ptr::null_mut();
    assert_eq!(unsafe { pt_certify(torus, 0.02, 5_000, 3, &mut cert) }, PtStatus::Ok);
    assert_eq!(unsafe { pt_certificate_verdict(cert) }, PtVerdict::Fail);
    unsafe {
        pt_certificate_free(cert);
        pt_cover_free(torus);
    }
}

#[test]
fn bform_handles() {
    let c = cyclic(2, [1, 1, 1, 1]);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { pt_bform_cyclic(c, 0.3, 0.2, 0.0, &mut r) }, PtStatus::Ok);
    let mut theta = [0.0f64; 2];
    let mut len = 0;
    assert_eq!(unsafe { pt_bform_theta(r, theta.as_mut_ptr(), 2, &mut len) }, PtStatus::Ok);
    assert_eq!(len, 1);
    assert!((theta[0] - 1.0).abs() < 1e-6);
    assert!(unsafe { pt_bform_quad_error(r) } <= 1e-6);
    unsafe {
        pt_bform_free(r);
        pt_cover_free(c);
    }

    let pillow = CString::new("2; (1 2); (1 2); (1 2); (1 2)").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { pt_cover_parse(pillow.as_ptr(), &mut p) }, PtStatus::Ok);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { pt_bform_cyclic(p, 0.3, 0.0, 0.0, &mut r) }, PtStatus::Precondition);
    unsafe { pt_cover_free(p) };

    let pts = [0.0, 0.0, 1.0, 0.0, 2.0, 0.5, -1.0, 1.0, 0.5, -1.0, 3.0, 0.0];
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { pt_bform_hyperelliptic(pts.as_ptr(), 6, 0.0, &mut r) }, PtStatus::Ok);
    assert!(unsafe { pt_bform_max_entry(r) } < 1e-6);
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { pt_bform_json(r, &mut json) }, PtStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["curve"]["genus"], 2);
    unsafe { pt_bform_free(r) };
}
