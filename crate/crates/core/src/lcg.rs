//! Logarithmic curvature graphs: points (ln ρ, ln |dL/d ln ρ|) and their
//! least-squares line.

use serde::Serialize;
use thiserror::Error;

use crate::curve::{theta_grid, CurveParams};
use crate::oracle::OracleReport;

/// Adjacent rows closer than this in ln ρ give no slope estimate.
pub const MIN_LOG_RHO_STEP: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcgError {
    #[error("need at least {needed} points, have {have}")]
    TooFewPoints { needed: usize, have: usize },
    #[error("all points share the same log rho; no line can be fitted")]
    DegenerateFit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LcgPoint {
    /// ln ρ
    pub x: f64,
    /// ln |dL/d ln ρ|
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LcgLine {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub count: usize,
}

/// Graph of the curvature law itself. Differentiating ρⁿ = aL + b gives
/// dL/d ln ρ = (n/a) ρⁿ, evaluated on the uniform θ grid.
pub fn lcg_closed_form(p: &CurveParams, count: usize) -> Vec<LcgPoint> {
    let scale = p.n() / p.a();
    theta_grid(p.theta0(), p.theta1(), count.max(2))
        .into_iter()
        .filter_map(|theta| {
            let l = p.arc_length(theta).ok()?;
            let rho = p.radius_of_curvature(l).ok()?;
            let point = LcgPoint {
                x: rho.ln(),
                y: (scale * rho.powf(p.n())).abs().ln(),
            };
            (point.x.is_finite() && point.y.is_finite()).then_some(point)
        })
        .collect()
}

/// Graph of the traced geometry: ds/d ln ρ from differences of adjacent
/// non-degenerate oracle rows, placed at the midpoint in ln |ρ|.
pub fn lcg_numeric(report: &OracleReport) -> Result<Vec<LcgPoint>, LcgError> {
    let rows: Vec<_> = report.valid_rows().collect();
    if rows.len() < 5 {
        return Err(LcgError::TooFewPoints {
            needed: 5,
            have: rows.len(),
        });
    }
    let points: Vec<LcgPoint> = rows
        .windows(2)
        .filter_map(|w| {
            let (x0, x1) = (w[0].rho_numeric.abs().ln(), w[1].rho_numeric.abs().ln());
            let dx = x1 - x0;
            if !(dx.abs() >= MIN_LOG_RHO_STEP) {
                return None;
            }
            let ds = w[1].s_numeric - w[0].s_numeric;
            let point = LcgPoint {
                x: 0.5 * (x0 + x1),
                y: (ds / dx).abs().ln(),
            };
            (point.x.is_finite() && point.y.is_finite()).then_some(point)
        })
        .collect();
    if points.len() < 2 {
        return Err(LcgError::TooFewPoints {
            needed: 2,
            have: points.len(),
        });
    }
    Ok(points)
}

/// Ordinary least squares y = slope·x + intercept.
pub fn linear_fit(points: &[LcgPoint]) -> Result<LcgLine, LcgError> {
    if points.len() < 2 {
        return Err(LcgError::TooFewPoints {
            needed: 2,
            have: points.len(),
        });
    }
    let count = points.len();
    let n = count as f64;
    let mean_x = points.iter().map(|p| p.x).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.y).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let dx = p.x - mean_x;
        let dy = p.y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(LcgError::DegenerateFit);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| {
            let r = p.y - (slope * p.x + intercept);
            r * r
        })
        .sum();
    let r_squared = if syy == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(LcgLine {
        slope,
        intercept,
        r_squared,
        count,
    })
}
