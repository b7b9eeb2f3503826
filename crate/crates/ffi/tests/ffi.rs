use std::ffi::{CStr, CString};
use std::ptr;

use carnot_steer_ffi::*;

const TARGET_36: [f64; 8] = [0.0, 2.0, -1.0, 1.0, 3.0, -2.0, -2.0, 0.0];
const TARGET_47: [f64; 16] = [
    0.0, 1.0, 2.0, -1.0, 1.0, 2.0, 0.0, 0.0, 3.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
];

fn last_error() -> String {
    let p = cs_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn new_mv(dim: usize, c: &[f64]) -> *mut CsMultivector {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cs_multivector_new(dim, c.as_ptr(), c.len(), &mut out) }, CsStatus::Ok);
    out
}

fn coeffs(mv: *const CsMultivector) -> Vec<f64> {
    let n = 1 << unsafe { cs_multivector_dim(mv) };
    let mut buf = vec![0.0; n];
    assert_eq!(unsafe { cs_multivector_coeffs(mv, buf.as_mut_ptr(), n) }, CsStatus::Ok);
    buf
}

#[test]
fn multivector_products() {
    // e1 and e1∧e2 in G_3
    let e1 = new_mv(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    let e12 = new_mv(3, &[0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(cs_multivector_product(CsProduct::Inner, e1, e12, &mut out), CsStatus::Ok);
        assert_eq!(coeffs(out), [0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        cs_multivector_free(out);

        assert_eq!(cs_multivector_product(CsProduct::Geometric, e12, e12, &mut out), CsStatus::Ok);
        assert_eq!(coeffs(out)[0], -1.0);
        cs_multivector_free(out);

        assert_eq!(cs_multivector_product(CsProduct::Outer, e1, e1, &mut out), CsStatus::Ok);
        assert!(coeffs(out).iter().all(|v| *v == 0.0));
        cs_multivector_free(out);

        assert_eq!(cs_multivector_dual(e12, &mut out), CsStatus::Ok);
        assert_eq!(coeffs(out), [0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0]);
        cs_multivector_free(out);

        let mut n = 0.0;
        assert_eq!(cs_multivector_norm(e12, &mut n), CsStatus::Ok);
        assert_eq!(n, 1.0);
        cs_multivector_free(e1);
        cs_multivector_free(e12);
    }
}

#[test]
fn mismatched_dimensions_and_bad_input() {
    let a = new_mv(3, &[0.0; 8]);
    let b = new_mv(4, &[0.0; 16]);
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(cs_multivector_product(CsProduct::Geometric, a, b, &mut out), CsStatus::DimensionMismatch);
        assert!(out.is_null());
        assert!(!last_error().is_empty());

        let c = [1.0; 5];
        assert_eq!(cs_multivector_new(3, c.as_ptr(), c.len(), &mut out), CsStatus::DimensionMismatch);
        assert_eq!(cs_multivector_new(3, ptr::null(), 8, &mut out), CsStatus::NullPointer);
        assert_eq!(cs_multivector_new(3, c.as_ptr(), 5, ptr::null_mut()), CsStatus::NullPointer);

        let nan = [f64::NAN; 8];
        assert_ne!(cs_multivector_new(3, nan.as_ptr(), 8, &mut out), CsStatus::Ok);

        let mut small = [0.0; 4];
        assert_eq!(cs_multivector_coeffs(a, small.as_mut_ptr(), 4), CsStatus::BufferTooSmall);
        assert!(last_error().contains("8 needed"));
        assert_eq!(cs_multivector_coeffs(ptr::null(), small.as_mut_ptr(), 4), CsStatus::NullPointer);
        assert_eq!(cs_multivector_dim(ptr::null()), 0);

        cs_multivector_free(a);
        cs_multivector_free(b);
        cs_multivector_free(ptr::null_mut());
    }
}

#[test]
fn invariants_of_worked_targets() {
    let mut out = [0.0; 4];
    unsafe {
        assert_eq!(cs_invariants(CsModel::M36, TARGET_36.as_ptr(), 8, out.as_mut_ptr(), 3), CsStatus::Ok);
        assert_eq!(&out[..3], &[14.0, -9.0, 3.0]);
        assert_eq!(cs_invariants(CsModel::M47, TARGET_47.as_ptr(), 16, out.as_mut_ptr(), 4), CsStatus::Ok);
        assert_eq!(out, [1.0, 14.0, -6.0, -9.0]);
        assert_eq!(
            cs_invariants(CsModel::M47, TARGET_47.as_ptr(), 16, out.as_mut_ptr(), 3),
            CsStatus::BufferTooSmall
        );
        // a scalar part is not a group element
        let mut bad = TARGET_36;
        bad[0] = 1.0;
        assert_eq!(cs_invariants(CsModel::M36, bad.as_ptr(), 8, out.as_mut_ptr(), 3), CsStatus::InvalidArgument);
    }
}

#[test]
fn align_bases_round_trip() {
    // quarter turn in the e1e2 plane
    let xs = [1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0];
    let ys = [0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    let mut rotor = [0.0; 8];
    unsafe {
        assert_eq!(cs_align_bases(3, xs.as_ptr(), ys.as_ptr(), rotor.as_mut_ptr(), 8), CsStatus::Ok);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sign = rotor[0].signum();
    assert!((rotor[0] * sign - h).abs() < 1e-12);
    assert!((rotor[3] * sign + h).abs() < 1e-12);

    let singular = [1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    unsafe {
        assert_ne!(cs_align_bases(3, singular.as_ptr(), ys.as_ptr(), rotor.as_mut_ptr(), 8), CsStatus::Ok);
        assert_eq!(cs_align_bases(9, xs.as_ptr(), ys.as_ptr(), rotor.as_mut_ptr(), 8), CsStatus::DimensionMismatch);
    }
}

#[test]
fn steer_and_read_back() {
    let mut opts = cs_steer_options_default();
    assert_eq!(opts.samples, 200);
    opts.samples = 9;
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(cs_steer(CsModel::M47, TARGET_47.as_ptr(), 16, &opts, &mut report), CsStatus::Ok);
        assert!((cs_report_t_final(report) - 6.0748).abs() < 5e-3);
        assert!(cs_report_endpoint_error(report) < 5e-2);
        assert_eq!(cs_report_sample_count(report), 9);
        assert_eq!(cs_report_row_width(report), 8);

        let mut rows = vec![0.0; 9 * 8];
        assert_eq!(cs_report_samples(report, rows.as_mut_ptr(), rows.len()), CsStatus::Ok);
        assert_eq!(rows[0], 0.0);
        assert_eq!(rows[8 * 8], cs_report_t_final(report));
        let last = &rows[8 * 8 + 1..];
        assert!((last[0] - 1.0).abs() < 5e-2 && (last[3] - 3.0).abs() < 5e-2);
        assert_eq!(cs_report_samples(report, rows.as_mut_ptr(), 10), CsStatus::BufferTooSmall);

        let mut rotor = [0.0; 16];
        assert_eq!(cs_report_rotor(report, rotor.as_mut_ptr(), 16), CsStatus::Ok);
        let norm2: f64 = rotor.iter().map(|v| v * v).sum();
        assert!((norm2 - 1.0).abs() < 1e-10);

        let mut params = [0.0; 5];
        assert_eq!(cs_report_params(report, params.as_mut_ptr(), 5), CsStatus::Ok);
        assert!((params[0] - 0.8358).abs() < 5e-3);

        let json = cs_report_to_json(report);
        assert!(!json.is_null());
        let mut passed = 0;
        assert_eq!(cs_verify_report_json(json, &mut passed), CsStatus::Ok);
        assert_eq!(passed, 1);
        cs_string_free(json);
        cs_report_free(report);
    }
}

#[test]
fn steer_with_default_options_pointer() {
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(cs_steer(CsModel::M36, TARGET_36.as_ptr(), 8, ptr::null(), &mut report), CsStatus::Ok);
        assert_eq!(cs_report_sample_count(report), 200);
        cs_report_free(report);
    }
}

#[test]
fn steering_failures_map_to_status_codes() {
    let mut report = ptr::null_mut();
    let degenerate = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
    unsafe {
        assert_eq!(
            cs_steer(CsModel::M36, degenerate.as_ptr(), 8, ptr::null(), &mut report),
            CsStatus::DegenerateConfiguration
        );
        assert!(last_error().contains("perturb"));
        let mut opts = cs_steer_options_default();
        opts.t_max = 0.1;
        assert_eq!(cs_steer(CsModel::M36, TARGET_36.as_ptr(), 8, &opts, &mut report), CsStatus::InfeasibleTarget);
        assert!(report.is_null());
        assert!(cs_report_t_final(ptr::null()).is_nan());
        assert!(cs_report_to_json(ptr::null()).is_null());
    }
}

#[test]
fn tampered_json_fails_verification() {
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(cs_steer(CsModel::M36, TARGET_36.as_ptr(), 8, ptr::null(), &mut report), CsStatus::Ok);
        let json = cs_report_to_json(report);
        let mut v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        cs_string_free(json);
        cs_report_free(report);

        v["rotor"][0] = (v["rotor"][0].as_f64().unwrap() + 0.3).into();
        let tampered = CString::new(v.to_string()).unwrap();
        let mut passed = 1;
        assert_eq!(cs_verify_report_json(tampered.as_ptr(), &mut passed), CsStatus::Ok);
        assert_eq!(passed, 0);
        assert!(!last_error().is_empty());

        let garbage = CString::new("{").unwrap();
        assert_eq!(cs_verify_report_json(garbage.as_ptr(), &mut passed), CsStatus::Parse);
        assert_eq!(cs_verify_report_json(ptr::null(), &mut passed), CsStatus::NullPointer);
    }
}

#[test]
fn generated_header_declares_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/carnot_steer.h")).unwrap();
    for name in [
        "cs_multivector_new",
        "cs_invariants",
        "cs_align_bases",
        "cs_steer",
        "cs_report_samples",
        "cs_verify_report_json",
        "CS_STATUS_BUFFER_TOO_SMALL",
        "CS_MODEL_M47",
        "typedef struct CsReport CsReport",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
