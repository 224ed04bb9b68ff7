use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use idemnorm_ffi::*;

fn group(json: &str) -> *mut IdemGroup {
    let text = CString::new(json).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { idem_group_from_json(text.as_ptr(), &mut g) }, IdemStatus::Ok);
    assert!(!g.is_null());
    g
}

#[test]
fn handle_lifecycle_and_norms() {
    let g = group(r#"{"type":"cyclic","n":5}"#);
    let mut order = 0usize;
    assert_eq!(unsafe { idem_group_order(g, &mut order) }, IdemStatus::Ok);
    assert_eq!(order, 5);

    let set = [0usize, 1];
    let mut v = 0.0;
    assert_eq!(unsafe { idem_subset_norm(g, set.as_ptr(), set.len(), &mut v) }, IdemStatus::Ok);
    assert!((v - 2.0 * (1.0 + 5f64.sqrt()) / 5.0).abs() < 1e-10);

    let re = [1.0, 1.0, 0.0, 0.0, 0.0];
    let mut trace = 0.0;
    let mut oracle = 0.0;
    unsafe {
        assert_eq!(idem_function_norm(g, re.as_ptr(), ptr::null(), 5, &mut trace), IdemStatus::Ok);
        assert_eq!(idem_oracle_norm(g, re.as_ptr(), ptr::null(), 5, &mut oracle), IdemStatus::Ok);
    }
    assert!((trace - oracle).abs() < 1e-10);

    let mut coset = true;
    assert_eq!(unsafe { idem_is_coset(g, set.as_ptr(), 2, &mut coset) }, IdemStatus::Ok);
    assert!(!coset);
    unsafe { idem_group_free(g) };
}

#[test]
fn json_reports_and_strings() {
    let g = group(r#"{"type":"symmetric","n":3}"#);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { idem_gap_audit_json(g, &mut s) }, IdemStatus::Ok);
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { idem_string_free(s) };
    assert!(text.contains("\"violations\": []"), "{text}");

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { idem_brute_force_max_json(g, &mut s) }, IdemStatus::Ok);
    assert!(unsafe { CStr::from_ptr(s) }.to_str().unwrap().contains("best_norm"));
    unsafe {
        idem_string_free(s);
        idem_group_free(g);
    }
}

#[test]
fn dirichlet_through_abi() {
    let mut v = 0.0;
    let mut points = 0usize;
    assert_eq!(unsafe { idem_dirichlet_norm(1, 1e-10, &mut v, &mut points) }, IdemStatus::Ok);
    assert!((v - (1.0 / 3.0 + 2.0 * 3f64.sqrt() / std::f64::consts::PI)).abs() < 1e-9);
    assert!(points.is_power_of_two());
}

#[test]
fn error_codes() {
    let mut g = ptr::null_mut();
    let bad = CString::new("{not json").unwrap();
    assert_eq!(unsafe { idem_group_from_json(bad.as_ptr(), &mut g) }, IdemStatus::InvalidJson);
    assert!(!idem_last_error_message().is_null());

    let symmetric9 = CString::new(r#"{"type":"symmetric","n":9}"#).unwrap();
    assert_eq!(unsafe { idem_group_from_json(symmetric9.as_ptr(), &mut g) }, IdemStatus::InvalidGroup);
    assert_eq!(unsafe { idem_group_from_json(ptr::null(), &mut g) }, IdemStatus::NullPointer);

    let h = group(r#"{"type":"dihedral","n":3}"#);
    let out_of_range = [7usize];
    let mut v = 0.0;
    assert_eq!(unsafe { idem_subset_norm(h, out_of_range.as_ptr(), 1, &mut v) }, IdemStatus::InvalidGroup);
    let re = [1.0; 6];
    assert_eq!(unsafe { idem_oracle_norm(h, re.as_ptr(), ptr::null(), 6, &mut v) }, IdemStatus::InvalidInput);
    assert_eq!(unsafe { idem_group_order(h, ptr::null_mut()) }, IdemStatus::NullPointer);
    unsafe {
        idem_group_free(h);
        idem_group_free(ptr::null_mut());
        idem_string_free(ptr::null_mut());
    }
    let version = unsafe { CStr::from_ptr(idem_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

/// The generated header must parse as C when a compiler is around.
#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/idemnorm.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["idem_group_from_json", "idem_subset_norm", "idem_string_free", "IdemStatus_Ok", "IdemGroup"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    std::fs::write(&src, format!("#include \"{}\"\nint main(void) {{ return IdemStatus_Ok; }}\n", header.display()))
        .unwrap();
    match Command::new("cc").args(["-std=c99", "-fsyntax-only"]).arg(&src).status() {
        Ok(status) => assert!(status.success()),
        Err(_) => eprintln!("no C compiler found; header syntax not checked"),
    }
}
