#ifndef POLAR_LAC_H
#define POLAR_LAC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PlcStatus {
  PLC_STATUS_OK = 0,
  PLC_STATUS_NULL_POINTER = 1,
  PLC_STATUS_INVALID_UTF8 = 2,
  PLC_STATUS_PARSE = 3,
  PLC_STATUS_DOMAIN = 4,
  PLC_STATUS_INVALID_PARAMS = 5,
  PLC_STATUS_BUFFER_TOO_SMALL = 6,
  PLC_STATUS_DEGENERATE = 7,
  PLC_STATUS_PANIC = 8,
} PlcStatus;

/**
 * Validated curve parameters.
 */
typedef struct PlcCurve PlcCurve;

/**
 * Parsed φ(θ) expression.
 */
typedef struct PlcPhi PlcPhi;

/**
 * One sample of a curve. Fields that could not be evaluated are NaN.
 */
typedef struct PlcSample {
  double theta;
  double arc_length;
  double radius;
  double rho;
  double phi;
  double beta;
  double x;
  double y;
  bool in_domain;
} PlcSample;

/**
 * Least-squares line y = slope·x + intercept.
 */
typedef struct PlcLine {
  double slope;
  double intercept;
  double r_squared;
  size_t count;
} PlcLine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call into this library on the same thread.
 */
const char *plc_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *plc_version(void);

/**
 * Parses a φ(θ) expression.
 *
 * # Safety
 * `source` must be NUL-terminated; `out` must be writable.
 */
enum PlcStatus plc_phi_parse(const char *source, struct PlcPhi **out);

/**
 * φ(θ) and dφ/dθ. Either output may be null.
 *
 * # Safety
 * `phi` must come from [`plc_phi_parse`].
 */
enum PlcStatus plc_phi_eval(const struct PlcPhi *phi,
                            double theta,
                            double *value,
                            double *derivative);

/**
 * # Safety
 * `phi` must come from [`plc_phi_parse`] and not be used afterwards. Null is a no-op.
 */
void plc_phi_free(struct PlcPhi *phi);

/**
 * Validates parameters for ρⁿ = aL + b on [θ₀, θ₁]. The curve keeps its own
 * copy of `phi`.
 *
 * # Safety
 * `phi` must come from [`plc_phi_parse`]; `out` must be writable.
 */
enum PlcStatus plc_curve_new(double n,
                             double a,
                             double b,
                             double theta0,
                             double theta1,
                             const struct PlcPhi *phi,
                             struct PlcCurve **out);

/**
 * # Safety
 * `curve` must come from [`plc_curve_new`] and not be used afterwards. Null is a no-op.
 */
void plc_curve_free(struct PlcCurve *curve);

/**
 * Closed-form arc length L(θ).
 *
 * # Safety
 * `curve` must come from [`plc_curve_new`]; `out` must be writable.
 */
enum PlcStatus plc_curve_arc_length(const struct PlcCurve *curve, double theta, double *out);

/**
 * Polar radius R(θ).
 *
 * # Safety
 * `curve` must come from [`plc_curve_new`]; `out` must be writable.
 */
enum PlcStatus plc_curve_radius(const struct PlcCurve *curve, double theta, double *out);

/**
 * Largest θ ≤ θ₁ where the closed form is real.
 *
 * # Safety
 * `curve` must come from [`plc_curve_new`]; `out` must be writable.
 */
enum PlcStatus plc_curve_domain_end(const struct PlcCurve *curve, double *out);

/**
 * Fills `out[0..count]` with samples on a uniform θ grid over [θ₀, θ₁].
 *
 * # Safety
 * `curve` must come from [`plc_curve_new`]; `out` must hold `capacity` samples.
 */
enum PlcStatus plc_curve_sample(const struct PlcCurve *curve,
                                size_t count,
                                struct PlcSample *out,
                                size_t capacity);

/**
 * Least-squares line through the closed-form logarithmic curvature graph
 * sampled at `count` angles.
 *
 * # Safety
 * `curve` must come from [`plc_curve_new`]; `out` must be writable.
 */
enum PlcStatus plc_curve_lcg_fit(const struct PlcCurve *curve, size_t count, struct PlcLine *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLAR_LAC_H */
