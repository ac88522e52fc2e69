use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use fockcat_ffi::*;
use serde_json::Value;

unsafe fn take(s: *mut c_char) -> String {
    let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
    fc_string_free(s);
    text
}

unsafe fn last_error() -> String {
    let p = fc_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

#[test]
fn eval_returns_json() {
    let text = CString::new("vev(0, 0, [6])").unwrap();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(fc_eval(text.as_ptr(), &mut out), FcStatus::Ok);
        assert!(fc_last_error().is_null());
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["cardinality"], "1/48");
    }
}

#[test]
fn errors_map_to_status_codes() {
    let cases = [
        ("gf(E of E, 4)", FcStatus::ComposeConst),
        ("gf(Z + * E)", FcStatus::Parse),
        ("solve(B = 1 + B)", FcStatus::Diverged),
        ("expect(1, E, 1)", FcStatus::Type),
        ("vev(9, 0, [1])", FcStatus::Size),
        ("dyson(0, 0, [2: 0.1], 0.5, 1, 8)", FcStatus::Input),
    ];
    for (text, status) in cases {
        let c = CString::new(text).unwrap();
        let mut out = ptr::null_mut();
        unsafe {
            assert_eq!(fc_eval(c.as_ptr(), &mut out), status, "{text}");
            assert!(out.is_null());
            assert!(!last_error().is_empty());
        }
    }
}

#[test]
fn null_and_invalid_arguments_are_rejected() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(fc_eval(ptr::null(), &mut out), FcStatus::NullPointer);
        let bad = [0xffu8, 0xfe, 0];
        assert_eq!(fc_eval(bad.as_ptr().cast(), &mut out), FcStatus::InvalidUtf8);
        let ok = CString::new("gf(Z)").unwrap();
        assert_eq!(fc_eval(ok.as_ptr(), ptr::null_mut()), FcStatus::NullPointer);
        fc_string_free(ptr::null_mut());
        fc_query_free(ptr::null_mut());
        fc_diagrams_free(ptr::null_mut());
    }
}

#[test]
fn query_handles_are_reusable() {
    let text = CString::new("inner(Z^3,Z^3,5)").unwrap();
    let mut q = ptr::null_mut();
    unsafe {
        assert_eq!(fc_query_parse(text.as_ptr(), &mut q), FcStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(fc_query_text(q, &mut s), FcStatus::Ok);
        assert_eq!(take(s), "inner(Z^3, Z^3, 5)");
        for _ in 0..2 {
            let mut json = ptr::null_mut();
            assert_eq!(fc_query_eval(q, &mut json), FcStatus::Ok);
            let v: Value = serde_json::from_str(&take(json)).unwrap();
            assert_eq!(v["cardinality"], "6");
        }
        fc_query_free(q);
    }
}

#[test]
fn diagram_handles() {
    let valences = [3usize, 3];
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(fc_diagrams_new(0, 0, valences.as_ptr(), valences.len(), &mut d), FcStatus::Ok);
        let mut count = 0;
        assert_eq!(fc_diagrams_class_count(d, &mut count), FcStatus::Ok);
        assert_eq!(count, 2);
        let mut card = ptr::null_mut();
        assert_eq!(fc_diagrams_cardinality(d, &mut card), FcStatus::Ok);
        assert_eq!(take(card), "5/12");
        let mut json = ptr::null_mut();
        assert_eq!(fc_diagrams_json(d, &mut json), FcStatus::Ok);
        let v: Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["labelled_count"], 15);
        fc_diagrams_free(d);

        assert_eq!(fc_diagrams_new(0, 0, ptr::null(), 0, &mut d), FcStatus::Ok);
        let mut card = ptr::null_mut();
        assert_eq!(fc_diagrams_cardinality(d, &mut card), FcStatus::Ok);
        assert_eq!(take(card), "1");
        fc_diagrams_free(d);
    }
}

#[test]
fn weak_quotient_of_a_swap() {
    let images = [1usize, 0, 2];
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(fc_weak_quotient_cardinality(3, images.as_ptr(), 1, &mut out), FcStatus::Ok);
        assert_eq!(take(out), "3/2");
        let not_a_permutation = [0usize, 0, 1];
        assert_eq!(fc_weak_quotient_cardinality(3, not_a_permutation.as_ptr(), 1, &mut out), FcStatus::Input);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(fc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/fockcat.h");
    let source = std::env::temp_dir().join(format!("fockcat-header-{}.c", std::process::id()));
    std::fs::write(
        &source,
        format!(
            "#include \"{}\"\nint main(void) {{ char *out = 0; FcStatus s = fc_eval(\"gf(Z)\", &out); fc_string_free(out); return s == FC_STATUS_OK ? 0 : 1; }}\n",
            header.display()
        ),
    )
    .unwrap();
    let Ok(status) = Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&source).status() else {
        eprintln!("no C compiler available, skipping");
        return;
    };
    std::fs::remove_file(&source).unwrap();
    assert!(status.success());
}
