//! C ABI over `polar-lac`.
//!
//! Every fallible call returns a [`PlcStatus`]; on failure a description is
//! available from [`plc_last_error`] on the same thread. Handles are opaque
//! and must be released with their `_free` function. Outputs are written only
//! on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use polar_lac::curve::CurveError;
use polar_lac::lcg::{lcg_closed_form, linear_fit};
use polar_lac::{CurveParams, PhiFunction};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    InvalidParams = 5,
    BufferTooSmall = 6,
    Degenerate = 7,
    Panic = 8,
}

/// Parsed φ(θ) expression.
pub struct PlcPhi(PhiFunction);

/// Validated curve parameters.
pub struct PlcCurve(CurveParams);

/// One sample of a curve. Fields that could not be evaluated are NaN.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlcSample {
    pub theta: f64,
    pub arc_length: f64,
    pub radius: f64,
    pub rho: f64,
    pub phi: f64,
    pub beta: f64,
    pub x: f64,
    pub y: f64,
    pub in_domain: bool,
}

/// Least-squares line y = slope·x + intercept.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlcLine {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub count: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(message).unwrap_or_default());
}

type Failure = (PlcStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure> + UnwindSafe) -> PlcStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => {
            set_error("");
            PlcStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PlcStatus::Panic
        }
    }
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: caller promises a valid pointer or null
    unsafe { p.as_ref() }.ok_or_else(|| (PlcStatus::NullPointer, format!("{what} is null")))
}

fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err((PlcStatus::NullPointer, "output pointer is null".into()));
    }
    // SAFETY: checked non-null; caller promises it is writable
    unsafe { out.write(value) };
    Ok(())
}

fn curve_failure(e: CurveError) -> Failure {
    let status = match e {
        CurveError::Phi(_)
        | CurveError::DomainExceeded { .. }
        | CurveError::NonpositiveRho { .. } => PlcStatus::Domain,
        _ => PlcStatus::InvalidParams,
    };
    (status, e.to_string())
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn plc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn plc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a φ(θ) expression.
///
/// # Safety
/// `source` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plc_phi_parse(source: *const c_char, out: *mut *mut PlcPhi) -> PlcStatus {
    guard(|| {
        if source.is_null() {
            return Err((PlcStatus::NullPointer, "source is null".into()));
        }
        // SAFETY: caller promises a NUL-terminated string
        let text = unsafe { CStr::from_ptr(source) }
            .to_str()
            .map_err(|e| (PlcStatus::InvalidUtf8, e.to_string()))?;
        let phi = PhiFunction::parse(text).map_err(|e| (PlcStatus::Parse, e.to_string()))?;
        write(out, Box::into_raw(Box::new(PlcPhi(phi))))
    })
}

/// φ(θ) and dφ/dθ. Either output may be null.
///
/// # Safety
/// `phi` must come from [`plc_phi_parse`].
#[no_mangle]
pub unsafe extern "C" fn plc_phi_eval(
    phi: *const PlcPhi,
    theta: f64,
    value: *mut f64,
    derivative: *mut f64,
) -> PlcStatus {
    guard(|| {
        let phi = non_null(phi, "phi")?;
        let v = phi
            .0
            .eval_with_derivative(theta)
            .map_err(|e| (PlcStatus::Domain, e.to_string()))?;
        if !value.is_null() {
            write(value, v.phi)?;
        }
        if !derivative.is_null() {
            write(derivative, v.dphi_dtheta)?;
        }
        Ok(())
    })
}

/// # Safety
/// `phi` must come from [`plc_phi_parse`] and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn plc_phi_free(phi: *mut PlcPhi) {
    if !phi.is_null() {
        // SAFETY: allocated by Box::into_raw in plc_phi_parse
        drop(unsafe { Box::from_raw(phi) });
    }
}

/// Validates parameters for ρⁿ = aL + b on [θ₀, θ₁]. The curve keeps its own
/// copy of `phi`.
///
/// # Safety
/// `phi` must come from [`plc_phi_parse`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plc_curve_new(
    n: f64,
    a: f64,
    b: f64,
    theta0: f64,
    theta1: f64,
    phi: *const PlcPhi,
    out: *mut *mut PlcCurve,
) -> PlcStatus {
    guard(|| {
        let phi = non_null(phi, "phi")?;
        let params = CurveParams::new(n, a, b, theta0, theta1, phi.0.clone())
            .map_err(|e| (PlcStatus::InvalidParams, e.to_string()))?;
        write(out, Box::into_raw(Box::new(PlcCurve(params))))
    })
}

/// # Safety
/// `curve` must come from [`plc_curve_new`] and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn plc_curve_free(curve: *mut PlcCurve) {
    if !curve.is_null() {
        // SAFETY: allocated by Box::into_raw in plc_curve_new
        drop(unsafe { Box::from_raw(curve) });
    }
}

/// Closed-form arc length L(θ).
///
/// # Safety
/// `curve` must come from [`plc_curve_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plc_curve_arc_length(
    curve: *const PlcCurve,
    theta: f64,
    out: *mut f64,
) -> PlcStatus {
    guard(|| {
        let curve = non_null(curve, "curve")?;
        write(out, curve.0.arc_length(theta).map_err(curve_failure)?)
    })
}

/// Polar radius R(θ).
///
/// # Safety
/// `curve` must come from [`plc_curve_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plc_curve_radius(
    curve: *const PlcCurve,
    theta: f64,
    out: *mut f64,
) -> PlcStatus {
    guard(|| {
        let curve = non_null(curve, "curve")?;
        write(out, curve.0.radius_at(theta).map_err(curve_failure)?)
    })
}

/// Largest θ ≤ θ₁ where the closed form is real.
///
/// # Safety
/// `curve` must come from [`plc_curve_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plc_curve_domain_end(curve: *const PlcCurve, out: *mut f64) -> PlcStatus {
    guard(|| {
        let curve = non_null(curve, "curve")?;
        write(out, curve.0.domain_end())
    })
}

/// Fills `out[0..count]` with samples on a uniform θ grid over [θ₀, θ₁].
///
/// # Safety
/// `curve` must come from [`plc_curve_new`]; `out` must hold `capacity` samples.
#[no_mangle]
pub unsafe extern "C" fn plc_curve_sample(
    curve: *const PlcCurve,
    count: usize,
    out: *mut PlcSample,
    capacity: usize,
) -> PlcStatus {
    guard(|| {
        let curve = non_null(curve, "curve")?;
        if out.is_null() {
            return Err((PlcStatus::NullPointer, "output buffer is null".into()));
        }
        if capacity < count {
            return Err((
                PlcStatus::BufferTooSmall,
                format!("buffer holds {capacity} samples, {count} requested"),
            ));
        }
        let samples = curve.0.sample(count).map_err(curve_failure)?;
        // SAFETY: non-null and at least `count` elements long per the contract
        let dest = unsafe { std::slice::from_raw_parts_mut(out, count) };
        for (d, s) in dest.iter_mut().zip(samples) {
            *d = PlcSample {
                theta: s.theta,
                arc_length: s.arc_length,
                radius: s.radius,
                rho: s.rho,
                phi: s.phi,
                beta: s.beta,
                x: s.x,
                y: s.y,
                in_domain: s.flags.in_domain,
            };
        }
        Ok(())
    })
}

/// Least-squares line through the closed-form logarithmic curvature graph
/// sampled at `count` angles.
///
/// # Safety
/// `curve` must come from [`plc_curve_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn plc_curve_lcg_fit(
    curve: *const PlcCurve,
    count: usize,
    out: *mut PlcLine,
) -> PlcStatus {
    guard(|| {
        let curve = non_null(curve, "curve")?;
        if count < 2 {
            return Err((
                PlcStatus::InvalidParams,
                format!("need at least 2 samples, got {count}"),
            ));
        }
        let line = linear_fit(&lcg_closed_form(&curve.0, count))
            .map_err(|e| (PlcStatus::Degenerate, e.to_string()))?;
        write(
            out,
            PlcLine {
                slope: line.slope,
                intercept: line.intercept,
                r_squared: line.r_squared,
                count: line.count,
            },
        )
    })
}
