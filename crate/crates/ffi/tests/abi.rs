use std::ffi::{c_char, CStr};
use std::ptr;

use polar_lac_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(plc_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn phi(src: &CStr) -> *mut PlcPhi {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { plc_phi_parse(src.as_ptr(), &mut out) },
        PlcStatus::Ok,
        "{}",
        last_error()
    );
    out
}

fn curve(n: f64, a: f64, theta1: f64, src: &CStr) -> *mut PlcCurve {
    let f = phi(src);
    let mut out = ptr::null_mut();
    let status = unsafe { plc_curve_new(n, a, 1.0, 0.0, theta1, f, &mut out) };
    unsafe { plc_phi_free(f) };
    assert_eq!(status, PlcStatus::Ok, "{}", last_error());
    out
}

#[test]
fn phi_round_trip() {
    let f = phi(c"theta^0.25 + 3");
    let (mut v, mut d) = (0.0, 0.0);
    assert_eq!(
        unsafe { plc_phi_eval(f, 16.0, &mut v, &mut d) },
        PlcStatus::Ok
    );
    assert_eq!((v, d), (5.0, 0.03125));
    assert_eq!(
        unsafe { plc_phi_eval(f, 16.0, &mut v, ptr::null_mut()) },
        PlcStatus::Ok
    );
    assert_eq!(
        unsafe { plc_phi_eval(f, -1.0, &mut v, &mut d) },
        PlcStatus::Domain
    );
    assert!(!last_error().is_empty());
    assert_eq!(v, 5.0, "outputs untouched on failure");
    unsafe { plc_phi_free(f) };
}

#[test]
fn parse_errors() {
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { plc_phi_parse(ptr::null(), &mut out) },
        PlcStatus::NullPointer
    );
    assert_eq!(
        unsafe { plc_phi_parse(c"pi".as_ptr(), ptr::null_mut()) },
        PlcStatus::NullPointer
    );
    assert_eq!(
        unsafe { plc_phi_parse(c"thta".as_ptr(), &mut out) },
        PlcStatus::Parse
    );
    assert!(last_error().contains("thta"));
    let bad = [0xffu8 as c_char, 0];
    assert_eq!(
        unsafe { plc_phi_parse(bad.as_ptr(), &mut out) },
        PlcStatus::InvalidUtf8
    );
    assert!(out.is_null());
}

#[test]
fn invalid_parameters() {
    let f = phi(c"pi/2");
    let mut out = ptr::null_mut();
    for (n, a, b, t0, t1) in [
        (0.0, 1.0, 1.0, 0.0, 1.0),
        (1.0, 0.0, 1.0, 0.0, 1.0),
        (1.0, 1.0, -1.0, 0.0, 1.0),
        (1.0, 1.0, 1.0, 2.0, 1.0),
        (f64::NAN, 1.0, 1.0, 0.0, 1.0),
    ] {
        let status = unsafe { plc_curve_new(n, a, b, t0, t1, f, &mut out) };
        assert_eq!(status, PlcStatus::InvalidParams);
    }
    assert_eq!(
        unsafe { plc_curve_new(1.0, 1.0, 1.0, 0.0, 1.0, ptr::null(), &mut out) },
        PlcStatus::NullPointer
    );
    assert!(out.is_null());
    unsafe { plc_phi_free(f) };
}

#[test]
fn arc_length_and_radius_match_the_library() {
    let c = curve(1.0, 1.0, 15.0, c"pi/2");
    let (mut l, mut r) = (f64::NAN, f64::NAN);
    assert_eq!(
        unsafe { plc_curve_arc_length(c, 1.0, &mut l) },
        PlcStatus::Ok
    );
    assert!((l - (1f64.exp() - 1.0)).abs() <= 1e-15);
    assert_eq!(unsafe { plc_curve_radius(c, 1.0, &mut r) }, PlcStatus::Ok);
    assert!((r - 1f64.exp()).abs() <= 4e-16 * r);
    let mut end = 0.0;
    assert_eq!(unsafe { plc_curve_domain_end(c, &mut end) }, PlcStatus::Ok);
    assert_eq!(end, 15.0);
    unsafe { plc_curve_free(c) };
}

#[test]
fn domain_errors_are_reported() {
    // u = a (n-1)/n ψ reaches -1 at ψ = 1 for n = 0.5, a = 1
    let c = curve(0.5, 1.0, 5.0, c"pi/2");
    let mut l = 0.0;
    assert_eq!(
        unsafe { plc_curve_arc_length(c, 2.0, &mut l) },
        PlcStatus::Domain
    );
    assert!(
        last_error().contains("last valid theta"),
        "{}",
        last_error()
    );
    let mut end = 0.0;
    assert_eq!(unsafe { plc_curve_domain_end(c, &mut end) }, PlcStatus::Ok);
    assert!((end - 1.0).abs() <= 1e-9, "{end}");

    let mut buf = vec![
        PlcSample {
            theta: 0.0,
            arc_length: 0.0,
            radius: 0.0,
            rho: 0.0,
            phi: 0.0,
            beta: 0.0,
            x: 0.0,
            y: 0.0,
            in_domain: true,
        };
        11
    ];
    assert_eq!(
        unsafe { plc_curve_sample(c, 11, buf.as_mut_ptr(), buf.len()) },
        PlcStatus::Ok
    );
    // θ = 1 is the boundary itself, where A = 0
    assert!(buf[..2].iter().all(|s| s.in_domain));
    assert!(buf[2..]
        .iter()
        .all(|s| !s.in_domain && s.arc_length.is_nan()));
    unsafe { plc_curve_free(c) };
}

#[test]
fn lcg_fit_and_buffers() {
    let c = curve(-1.0, 2.0, 5.0, c"pi/8");
    let mut line = PlcLine {
        slope: 0.0,
        intercept: 0.0,
        r_squared: 0.0,
        count: 0,
    };
    assert_eq!(
        unsafe { plc_curve_lcg_fit(c, 128, &mut line) },
        PlcStatus::Ok
    );
    assert!((line.slope + 1.0).abs() <= 1e-9);
    assert!((line.intercept - 0.5f64.ln()).abs() <= 1e-9);
    assert_eq!(line.count, 128);
    assert_eq!(
        unsafe { plc_curve_lcg_fit(c, 1, &mut line) },
        PlcStatus::InvalidParams
    );
    assert_eq!(
        unsafe { plc_curve_sample(c, 4, ptr::null_mut(), 4) },
        PlcStatus::NullPointer
    );
    unsafe { plc_curve_free(c) };
    unsafe { plc_curve_free(ptr::null_mut()) };
    unsafe { plc_phi_free(ptr::null_mut()) };
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(plc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
