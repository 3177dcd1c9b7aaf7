//! Numeric differential geometry of the traced curve (R(θ) cos θ, R(θ) sin θ).
//!
//! Nothing here uses the closed-form arc length or curvature law except to
//! place them side by side with the numeric columns in an [`OracleReport`].

use serde::Serialize;
use thiserror::Error;

use crate::curve::{theta_grid, CurveError, CurveParams};

/// Relative step of the central-difference stencils.
pub const STEP_SCALE: f64 = 1e-5;
/// Absolute tolerance of the arc-length quadrature, scaled by max(1, |s|).
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;
pub const MAX_QUADRATURE_DEPTH: u32 = 48;
/// |L| above this aborts the ODE integration.
pub const BLOW_UP: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("radius is not finite near theta = {theta}")]
    NonFinite { theta: f64 },
    #[error("degenerate point at theta = {theta}: R and R' vanish")]
    Degenerate { theta: f64 },
    #[error("quadrature on [{from}, {to}] did not reach tolerance")]
    ToleranceNotMet { from: f64, to: f64 },
    #[error("invalid interval [{from}, {to}]")]
    InvalidInterval { from: f64, to: f64 },
    #[error("step must be positive, got {0}")]
    InvalidStep(f64),
    #[error("ODE integration needs at least 100 steps, got {0}")]
    TooFewSteps(usize),
    #[error("ODE integration blew up; last valid theta = {last_theta}")]
    BlowUp { last_theta: f64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Default stencil step at θ.
pub fn default_step(theta: f64) -> f64 {
    STEP_SCALE * theta.abs().max(1.0)
}

fn finite(theta: f64, v: f64) -> Result<f64, OracleError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(OracleError::NonFinite { theta })
    }
}

/// R, R′, R″ by second-order central differences.
fn radius_jet<F: Fn(f64) -> f64>(
    radius: &F,
    theta: f64,
    h: f64,
) -> Result<(f64, f64, f64), OracleError> {
    if !(h > 0.0) {
        return Err(OracleError::InvalidStep(h));
    }
    let r0 = finite(theta, radius(theta))?;
    let rp = finite(theta, radius(theta + h))?;
    let rm = finite(theta, radius(theta - h))?;
    let d1 = (rp - rm) / (2.0 * h);
    let d2 = (rp - 2.0 * r0 + rm) / (h * h);
    Ok((r0, d1, d2))
}

/// Signed curvature κ = (R² + 2R′² − R R″) / (R² + R′²)^{3/2}.
pub fn numeric_curvature<F: Fn(f64) -> f64>(
    radius: F,
    theta: f64,
    h: f64,
) -> Result<f64, OracleError> {
    let (r, d1, d2) = radius_jet(&radius, theta, h)?;
    let speed2 = r * r + d1 * d1;
    if speed2 < 1e-24 {
        return Err(OracleError::Degenerate { theta });
    }
    Ok((r * r + 2.0 * d1 * d1 - r * d2) / (speed2 * speed2.sqrt()))
}

/// Angle between tangent and radius, tan φ = R / R′, folded into (0, π).
pub fn numeric_phi<F: Fn(f64) -> f64>(radius: F, theta: f64, h: f64) -> Result<f64, OracleError> {
    let (r, d1, _) = radius_jet(&radius, theta, h)?;
    if r * r + d1 * d1 < 1e-24 {
        return Err(OracleError::Degenerate { theta });
    }
    let phi = r.atan2(d1);
    Ok(if phi <= 0.0 {
        phi + std::f64::consts::PI
    } else {
        phi
    })
}

/// Distance between two angles modulo π.
pub fn angular_distance(x: f64, y: f64) -> f64 {
    let d = (x - y).rem_euclid(std::f64::consts::PI);
    d.min(std::f64::consts::PI - d)
}

/// Geometric arc length ∫ √(R² + R′²) dθ by adaptive Simpson quadrature.
pub fn numeric_arc_length<F: Fn(f64) -> f64>(
    radius: F,
    theta_a: f64,
    theta_b: f64,
) -> Result<f64, OracleError> {
    if !(theta_a <= theta_b) {
        return Err(OracleError::InvalidInterval {
            from: theta_a,
            to: theta_b,
        });
    }
    if theta_a == theta_b {
        return Ok(0.0);
    }
    let speed = |t: f64| -> Result<f64, OracleError> {
        let h = default_step(t);
        let r = finite(t, radius(t))?;
        let d1 = (finite(t, radius(t + h))? - finite(t, radius(t - h))?) / (2.0 * h);
        Ok((r * r + d1 * d1).sqrt())
    };
    let fa = speed(theta_a)?;
    let fm = speed(0.5 * (theta_a + theta_b))?;
    let fb = speed(theta_b)?;
    let whole = (theta_b - theta_a) / 6.0 * (fa + 4.0 * fm + fb);
    let tol = QUADRATURE_TOLERANCE * whole.abs().max(1.0);
    simpson(
        &speed,
        theta_a,
        theta_b,
        fa,
        fm,
        fb,
        whole,
        tol,
        MAX_QUADRATURE_DEPTH,
    )
}

#[allow(clippy::too_many_arguments)]
fn simpson<G: Fn(f64) -> Result<f64, OracleError>>(
    f: &G,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, OracleError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(OracleError::ToleranceNotMet { from: a, to: b });
    }
    Ok(simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Arc length from re-integrating the curvature law with classical RK4.
///
/// Steps are uniform in θ. Within a step the law dL = (aL + b)^{1/n} dψ is
/// integrated in ψ = θ + φ, the accumulated tangent turning, so f′ is never
/// evaluated; this keeps the integrator usable when f′ is singular at an
/// endpoint (`sqrt(theta)` at 0). A θ-step that turns by more than the mean
/// is split into equal sub-steps in ψ. Values between nodes come from cubic
/// Hermite interpolation in ψ.
#[derive(Debug, Clone)]
pub struct OdeArcLength {
    params: CurveParams,
    thetas: Vec<f64>,
    psis: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl OdeArcLength {
    pub fn end(&self) -> f64 {
        *self.thetas.last().expect("at least one node")
    }

    pub fn start(&self) -> f64 {
        self.thetas[0]
    }

    /// L at the final node.
    pub fn final_value(&self) -> f64 {
        *self.values.last().expect("at least one node")
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.thetas.iter().copied().zip(self.values.iter().copied())
    }

    /// Dense output. `None` outside the integrated range or where φ fails.
    pub fn eval(&self, theta: f64) -> Option<f64> {
        let (t0, t1) = (self.start(), self.end());
        if !(theta >= t0 && theta <= t1) {
            return None;
        }
        let steps = self.thetas.len() - 1;
        let i = (((theta - t0) / (t1 - t0)) * steps as f64).floor() as usize;
        let mut i = i.min(steps - 1);
        if theta < self.thetas[i] {
            i -= 1;
        } else if theta > self.thetas[i + 1] && i + 1 < steps {
            i += 1;
        }
        if theta == self.thetas[i] {
            return Some(self.values[i]);
        }
        if theta == self.thetas[i + 1] {
            return Some(self.values[i + 1]);
        }
        let dpsi = self.psis[i + 1] - self.psis[i];
        if dpsi == 0.0 {
            return Some(self.values[i]);
        }
        let psi = self.params.turning(theta).ok()?;
        let t = (psi - self.psis[i]) / dpsi;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.slopes[i] * dpsi, self.slopes[i + 1] * dpsi);
        let t2 = t * t;
        let t3 = t2 * t;
        Some(
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                + (t3 - 2.0 * t2 + t) * m0
                + (-2.0 * t3 + 3.0 * t2) * y1
                + (t3 - t2) * m1,
        )
    }
}

/// Integrates over [θ₀, θ₁]. See [`ode_arc_length_to`].
pub fn ode_arc_length(p: &CurveParams, steps: usize) -> Result<OdeArcLength, OracleError> {
    ode_arc_length_to(p, p.theta1(), steps)
}

/// Integrates dL/dψ = (aL + b)^{1/n}, L(θ₀) = 0, over [θ₀, end].
pub fn ode_arc_length_to(
    p: &CurveParams,
    end: f64,
    steps: usize,
) -> Result<OdeArcLength, OracleError> {
    if steps < 100 {
        return Err(OracleError::TooFewSteps(steps));
    }
    if !(end > p.theta0()) {
        return Err(OracleError::InvalidInterval {
            from: p.theta0(),
            to: end,
        });
    }
    let (a, b, inv_n) = (p.a(), p.b(), 1.0 / p.n());
    let exponential = matches!(p.class(), crate::curve::CurveClass::Exponential);
    let rate = |l: f64| -> Option<f64> {
        let v = a * l + b;
        if !(v > 0.0) {
            return None;
        }
        let r = if exponential { v } else { v.powf(inv_n) };
        r.is_finite().then_some(r)
    };

    let thetas = theta_grid(p.theta0(), end, steps + 1);
    let mut psis = Vec::with_capacity(thetas.len());
    psis.push(0.0);
    for (i, &t) in thetas.iter().enumerate().skip(1) {
        let psi = p.turning(t).map_err(|_| OracleError::BlowUp {
            last_theta: thetas[i - 1],
        })?;
        psis.push(psi);
    }
    // A θ-step whose turning exceeds the mean is split into equal ψ sub-steps.
    let mean = psis.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>() / steps as f64;

    let mut values = Vec::with_capacity(thetas.len());
    let mut slopes = Vec::with_capacity(thetas.len());
    let mut l = 0.0;
    values.push(l);
    slopes.push(rate(l).ok_or(OracleError::BlowUp {
        last_theta: thetas[0],
    })?);
    for i in 0..steps {
        let blow_up = || OracleError::BlowUp {
            last_theta: thetas[i],
        };
        let dpsi = psis[i + 1] - psis[i];
        let pieces = if mean > 0.0 {
            (dpsi.abs() / mean).ceil().max(1.0) as usize
        } else {
            1
        };
        let h = dpsi / pieces as f64;
        for _ in 0..pieces {
            let k1 = rate(l).ok_or_else(blow_up)?;
            let k2 = rate(l + 0.5 * h * k1).ok_or_else(blow_up)?;
            let k3 = rate(l + 0.5 * h * k2).ok_or_else(blow_up)?;
            let k4 = rate(l + h * k3).ok_or_else(blow_up)?;
            l += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        if !(l.abs() <= BLOW_UP) {
            return Err(blow_up());
        }
        values.push(l);
        slopes.push(rate(l).ok_or_else(blow_up)?);
    }
    Ok(OdeArcLength {
        params: p.clone(),
        thetas,
        psis,
        values,
        slopes,
    })
}

/// One θ of an [`OracleReport`]. Closed-form columns are NaN for bare traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRow {
    pub theta: f64,
    pub kappa_numeric: f64,
    pub rho_numeric: f64,
    pub s_numeric: f64,
    pub phi_actual: f64,
    pub l_closed: f64,
    pub l_ode: f64,
    pub rho_closed: f64,
    pub phi_prescribed: f64,
    /// Some numeric quantity could not be computed on this row.
    pub degenerate: bool,
}

/// Max and RMS of a residual column over the rows where both sides exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub max: f64,
    pub rms: f64,
    pub rows: usize,
}

impl Residual {
    fn collect(values: impl Iterator<Item = f64>) -> Self {
        let mut max: f64 = 0.0;
        let mut sum2 = 0.0;
        let mut rows = 0;
        for v in values.filter(|v| v.is_finite()) {
            max = max.max(v);
            sum2 += v * v;
            rows += 1;
        }
        let rms = if rows > 0 {
            (sum2 / rows as f64).sqrt()
        } else {
            f64::NAN
        };
        if rows == 0 {
            max = f64::NAN;
        }
        Residual { max, rms, rows }
    }
}

fn relative(x: f64, reference: f64) -> f64 {
    let d = (x - reference).abs();
    if reference != 0.0 {
        d / reference.abs()
    } else {
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualSummary {
    /// Relative, ODE re-integration vs closed-form L.
    pub l_ode_vs_closed: Residual,
    /// Relative, geometric arc length vs closed-form L.
    pub s_numeric_vs_l_closed: Residual,
    /// Relative, traced radius of curvature vs the law's ρ.
    pub rho_numeric_vs_closed: Residual,
    /// Absolute angular distance modulo π.
    pub phi_actual_vs_prescribed: Residual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
    pub summary: ResidualSummary,
}

impl OracleReport {
    /// Rows whose numeric columns all exist.
    pub fn valid_rows(&self) -> impl Iterator<Item = &OracleRow> {
        self.rows.iter().filter(|r| !r.degenerate)
    }

    fn summarize(rows: Vec<OracleRow>) -> Self {
        let ok = || rows.iter().filter(|r| !r.degenerate);
        let summary = ResidualSummary {
            l_ode_vs_closed: Residual::collect(rows.iter().map(|r| relative(r.l_ode, r.l_closed))),
            s_numeric_vs_l_closed: Residual::collect(
                ok().map(|r| relative(r.s_numeric, r.l_closed)),
            ),
            rho_numeric_vs_closed: Residual::collect(
                ok().map(|r| relative(r.rho_numeric, r.rho_closed)),
            ),
            phi_actual_vs_prescribed: Residual::collect(
                ok().map(|r| angular_distance(r.phi_actual, r.phi_prescribed)),
            ),
        };
        OracleReport { rows, summary }
    }
}

/// Numeric columns only, for an arbitrary radius function on a uniform grid.
pub fn survey<F: Fn(f64) -> f64>(
    radius: F,
    theta0: f64,
    theta1: f64,
    count: usize,
) -> OracleReport {
    let thetas = theta_grid(theta0, theta1, count.max(2));
    OracleReport::summarize(trace_rows(&radius, &thetas))
}

fn trace_rows<F: Fn(f64) -> f64>(radius: &F, thetas: &[f64]) -> Vec<OracleRow> {
    let mut rows: Vec<OracleRow> = thetas
        .iter()
        .map(|&theta| {
            let h = default_step(theta);
            let kappa = numeric_curvature(radius, theta, h).ok();
            let phi = numeric_phi(radius, theta, h).ok();
            OracleRow {
                theta,
                kappa_numeric: kappa.unwrap_or(f64::NAN),
                rho_numeric: kappa
                    .map_or(f64::NAN, |k| if k != 0.0 { 1.0 / k } else { f64::INFINITY }),
                s_numeric: f64::NAN,
                phi_actual: phi.unwrap_or(f64::NAN),
                l_closed: f64::NAN,
                l_ode: f64::NAN,
                rho_closed: f64::NAN,
                phi_prescribed: f64::NAN,
                degenerate: kappa.is_none() || phi.is_none(),
            }
        })
        .collect();

    // s = 0 at the first row whose radius is finite; accumulate until the
    // quadrature first fails.
    let start = rows.iter().position(|r| r.kappa_numeric.is_finite());
    if let Some(start) = start {
        rows[start].s_numeric = 0.0;
        let mut s = 0.0;
        for i in start + 1..rows.len() {
            match numeric_arc_length(radius, rows[i - 1].theta, rows[i].theta) {
                Ok(ds) => {
                    s += ds;
                    rows[i].s_numeric = s;
                }
                Err(_) => break,
            }
        }
    }
    for r in &mut rows {
        if !r.s_numeric.is_finite() || !r.rho_numeric.is_finite() {
            r.degenerate = true;
        }
    }
    rows
}

/// Closed-form, ODE and numeric trace columns on the `count`-point sample grid.
/// Rows past the end of the real domain are flagged degenerate.
pub fn compare(p: &CurveParams, count: usize) -> OracleReport {
    let thetas = theta_grid(p.theta0(), p.theta1(), count.max(2));
    let radius = |t: f64| p.radius_at(t).unwrap_or(f64::NAN);
    let mut rows = trace_rows(&radius, &thetas);

    let end = p.domain_end();
    let ode = if end > p.theta0() {
        ode_arc_length_to(p, end, 10_000).ok()
    } else {
        None
    };
    for row in &mut rows {
        let theta = row.theta;
        if let Ok(l) = p.arc_length(theta) {
            row.l_closed = l;
            row.rho_closed = p.radius_of_curvature(l).unwrap_or(f64::NAN);
        } else {
            row.degenerate = true;
        }
        row.phi_prescribed = p.phi().eval(theta).unwrap_or(f64::NAN);
        row.l_ode = ode.as_ref().and_then(|o| o.eval(theta)).unwrap_or(f64::NAN);
    }
    OracleReport::summarize(rows)
}
