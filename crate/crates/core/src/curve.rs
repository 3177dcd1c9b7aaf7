//! Closed-form polar log-aesthetic curves.
//!
//! The curvature law ρⁿ = aL + b combined with a prescribed polar tangential
//! angle φ = f(θ) gives the arc length L(θ) in closed form. Writing
//! ψ(θ) = θ − θ₀ + f(θ) − f(θ₀):
//!
//! ```text
//! n = 1:  L = (b/a) (exp(a ψ) − 1)
//! n ≠ 1:  L = (A^{n/(n−1)} − b) / a,   A = (a (n−1) ψ + n b^{1−1/n}) / n
//! ```
//!
//! and the radius is R = ρ(L) (1 + f′(θ)) sin f(θ).

use serde::Serialize;
use thiserror::Error;

use crate::phi::{DomainError, PhiFunction};

/// `|n − 1|` at or below this uses the exponential (n = 1) family.
pub const CLASS_I_TOLERANCE: f64 = 1e-9;

/// Absolute θ tolerance when bisecting for the end of the real domain.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Grid size used by [`CurveParams::validate`].
pub const VALIDATION_GRID: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("slope n must be nonzero and finite, got {0}")]
    InvalidSlope(f64),
    #[error("rate a must be nonzero and finite, got {0}")]
    InvalidRate(f64),
    #[error("intercept b must be positive and finite, got {0}")]
    InvalidIntercept(f64),
    #[error("theta range [{theta0}, {theta1}] is empty or not finite")]
    InvalidRange { theta0: f64, theta1: f64 },
    #[error("phi is not evaluable at theta0: {0}")]
    PhiAtStart(DomainError),
    #[error(transparent)]
    Phi(#[from] DomainError),
    #[error(
        "power base A(theta) is not positive at theta = {theta}; last valid theta is {boundary}"
    )]
    DomainExceeded { theta: f64, boundary: f64 },
    #[error("a*L + b = {value} is not positive")]
    NonpositiveRho { value: f64 },
    #[error("sample count must be at least 2, got {0}")]
    TooFewSamples(usize),
}

/// The two closed-form families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveClass {
    /// n = 1: exponential arc length, logarithmic-spiral family.
    Exponential,
    /// n ≠ 1: power-law arc length.
    Power,
}

/// One polar log-aesthetic curve: the law ρⁿ = aL + b on [θ₀, θ₁] with φ = f(θ).
#[derive(Debug, Clone)]
pub struct CurveParams {
    n: f64,
    a: f64,
    b: f64,
    theta0: f64,
    theta1: f64,
    phi: PhiFunction,
    phi0: f64,
}

impl CurveParams {
    pub fn new(
        n: f64,
        a: f64,
        b: f64,
        theta0: f64,
        theta1: f64,
        phi: PhiFunction,
    ) -> Result<Self, CurveError> {
        if n == 0.0 || !n.is_finite() {
            return Err(CurveError::InvalidSlope(n));
        }
        if a == 0.0 || !a.is_finite() {
            return Err(CurveError::InvalidRate(a));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(CurveError::InvalidIntercept(b));
        }
        if !theta0.is_finite() || !theta1.is_finite() || !(theta1 > theta0) {
            return Err(CurveError::InvalidRange { theta0, theta1 });
        }
        let phi0 = phi.eval(theta0).map_err(CurveError::PhiAtStart)?;
        Ok(CurveParams {
            n,
            a,
            b,
            theta0,
            theta1,
            phi,
            phi0,
        })
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn phi(&self) -> &PhiFunction {
        &self.phi
    }

    /// f(θ₀).
    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn class(&self) -> CurveClass {
        if (self.n - 1.0).abs() <= CLASS_I_TOLERANCE {
            CurveClass::Exponential
        } else {
            CurveClass::Power
        }
    }

    /// Same curve with a different slope.
    pub fn with_n(&self, n: f64) -> Result<Self, CurveError> {
        CurveParams::new(
            n,
            self.a,
            self.b,
            self.theta0,
            self.theta1,
            self.phi.clone(),
        )
    }

    /// Same curve with a different intercept.
    pub fn with_b(&self, b: f64) -> Result<Self, CurveError> {
        CurveParams::new(
            self.n,
            self.a,
            b,
            self.theta0,
            self.theta1,
            self.phi.clone(),
        )
    }

    /// Same curve on a different θ range.
    pub fn with_range(&self, theta0: f64, theta1: f64) -> Result<Self, CurveError> {
        CurveParams::new(self.n, self.a, self.b, theta0, theta1, self.phi.clone())
    }

    /// ψ(θ) = θ − θ₀ + f(θ) − f(θ₀), the accumulated turning of the tangent.
    pub fn turning(&self, theta: f64) -> Result<f64, DomainError> {
        Ok(theta - self.theta0 + (self.phi.eval(theta)? - self.phi0))
    }

    /// A(θ) − 1 scaled by b^{(n−1)/n}; the power base is positive iff this is > −1.
    fn power_offset(&self, psi: f64) -> f64 {
        let n = self.n;
        let e = (n - 1.0) / n;
        self.a * e * psi / self.b.powf(e)
    }

    /// A(θ) = (a (n−1) ψ + n b^{1−1/n}) / n, the base of the fractional power
    /// in the n ≠ 1 arc length. Always positive for the n = 1 family.
    pub fn power_base(&self, theta: f64) -> Result<f64, DomainError> {
        let psi = self.turning(theta)?;
        Ok(match self.class() {
            CurveClass::Exponential => 1.0,
            CurveClass::Power => {
                let e = (self.n - 1.0) / self.n;
                self.b.powf(e) * (1.0 + self.power_offset(psi))
            }
        })
    }

    fn in_real_domain(&self, theta: f64) -> bool {
        match self.class() {
            CurveClass::Exponential => self.phi.eval(theta).is_ok(),
            CurveClass::Power => match self.turning(theta) {
                Ok(psi) => self.power_offset(psi) > -1.0,
                Err(_) => false,
            },
        }
    }

    /// Last θ between θ₀ and `outside` (exclusive) for which the closed form is
    /// real, by bisection. `outside` must be a point where it is not.
    fn domain_boundary(&self, outside: f64) -> f64 {
        let mut good = self.theta0;
        let mut bad = outside;
        while (bad - good).abs() > BOUNDARY_TOLERANCE {
            let mid = 0.5 * (good + bad);
            if mid == good || mid == bad {
                break;
            }
            if self.in_real_domain(mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    }

    /// Largest θ ≤ θ₁ up to which the closed form stays real, scanning the
    /// validation grid and refining the first failure by bisection.
    pub fn domain_end(&self) -> f64 {
        let grid = theta_grid(self.theta0, self.theta1, VALIDATION_GRID);
        for &t in &grid[1..] {
            if !self.in_real_domain(t) {
                return self.domain_boundary(t);
            }
        }
        self.theta1
    }

    fn arc_length_from_turning(&self, psi: f64) -> Option<f64> {
        let (a, b, n) = (self.a, self.b, self.n);
        match self.class() {
            CurveClass::Exponential => Some(b / a * (a * psi).exp_m1()),
            CurveClass::Power => {
                // A^{n/(n-1)} - b = b ((1 + u)^{n/(n-1)} - 1), exact zero at ψ = 0
                let u = self.power_offset(psi);
                if !(u > -1.0) {
                    return None;
                }
                Some(b / a * (n / (n - 1.0) * u.ln_1p()).exp_m1())
            }
        }
    }

    /// Closed-form arc length L(θ); L(θ₀) = 0.
    pub fn arc_length(&self, theta: f64) -> Result<f64, CurveError> {
        let psi = self.turning(theta)?;
        self.arc_length_from_turning(psi)
            .ok_or_else(|| CurveError::DomainExceeded {
                theta,
                boundary: self.domain_boundary(theta),
            })
    }

    /// ρ = (aL + b)^{1/n}.
    pub fn radius_of_curvature(&self, arc_length: f64) -> Result<f64, CurveError> {
        let value = self.a * arc_length + self.b;
        if !(value > 0.0) {
            return Err(CurveError::NonpositiveRho { value });
        }
        Ok(match self.class() {
            CurveClass::Exponential => value,
            CurveClass::Power => value.powf(1.0 / self.n),
        })
    }

    /// R(θ) = ρ(L(θ)) (1 + f′(θ)) sin f(θ). May be negative.
    pub fn radius_at(&self, theta: f64) -> Result<f64, CurveError> {
        let l = self.arc_length(theta)?;
        let rho = self.radius_of_curvature(l)?;
        let pv = self.phi.eval_with_derivative(theta)?;
        Ok(rho * (1.0 + pv.dphi_dtheta) * pv.phi.sin())
    }

    /// Evaluates every closed-form quantity at one θ.
    pub fn evaluate(&self, theta: f64) -> Result<CurveSample, CurveError> {
        let l = self.arc_length(theta)?;
        let rho = self.radius_of_curvature(l)?;
        let pv = self.phi.eval_with_derivative(theta)?;
        let monotone = 1.0 + pv.dphi_dtheta;
        let radius = rho * monotone * pv.phi.sin();
        let (sin_t, cos_t) = theta.sin_cos();
        Ok(CurveSample {
            theta,
            arc_length: l,
            radius,
            rho,
            phi: pv.phi,
            dphi: pv.dphi_dtheta,
            beta: theta + pv.phi,
            x: radius * cos_t,
            y: radius * sin_t,
            flags: SampleFlags {
                rho_positive: rho > 0.0,
                radius_positive: radius > 0.0,
                monotone_factor_positive: monotone > 0.0,
                in_domain: true,
            },
        })
    }

    /// `count` samples on a uniform θ grid over [θ₀, θ₁]. Samples at or past a
    /// point where the closed form leaves its real domain are flagged
    /// `in_domain = false`; samples where only φ fails are flagged individually.
    pub fn sample(&self, count: usize) -> Result<Vec<CurveSample>, CurveError> {
        if count < 2 {
            return Err(CurveError::TooFewSamples(count));
        }
        let mut exceeded = false;
        let samples = theta_grid(self.theta0, self.theta1, count)
            .into_iter()
            .map(|theta| {
                if exceeded {
                    return CurveSample::out_of_domain(theta, self.phi.eval(theta).ok());
                }
                match self.evaluate(theta) {
                    Ok(s) => s,
                    Err(e) => {
                        if matches!(e, CurveError::DomainExceeded { .. }) {
                            exceeded = true;
                        }
                        CurveSample::out_of_domain(theta, self.phi.eval(theta).ok())
                    }
                }
            })
            .collect();
        Ok(samples)
    }

    /// Checks the positivity conditions on a [`VALIDATION_GRID`]-point grid.
    pub fn validate(&self) -> ValidationReport {
        let mut checks: Vec<ConditionCheck> = Condition::ALL
            .iter()
            .map(|&condition| ConditionCheck {
                condition,
                holds: true,
                first_violation: None,
            })
            .collect();
        let mut violate = |c: Condition, theta: f64| {
            let check = &mut checks[c as usize];
            if check.holds {
                check.holds = false;
                check.first_violation = Some(theta);
            }
        };
        for theta in theta_grid(self.theta0, self.theta1, VALIDATION_GRID) {
            let s = match self.evaluate(theta) {
                Ok(s) => s,
                Err(_) => {
                    violate(Condition::InDomain, theta);
                    continue;
                }
            };
            if !s.flags.rho_positive {
                violate(Condition::RhoPositive, theta);
            }
            if !s.flags.monotone_factor_positive {
                violate(Condition::MonotoneFactorPositive, theta);
            }
            if !(s.phi.sin() > 0.0) {
                violate(Condition::SinPhiPositive, theta);
            }
            if !s.flags.radius_positive {
                violate(Condition::RadiusPositive, theta);
            }
        }
        ValidationReport {
            grid: VALIDATION_GRID,
            checks,
        }
    }
}

/// Uniform grid with both endpoints hit exactly.
pub fn theta_grid(theta0: f64, theta1: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "grid needs at least two points");
    let step = (theta1 - theta0) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i == count - 1 {
                theta1
            } else {
                theta0 + i as f64 * step
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleFlags {
    pub rho_positive: bool,
    pub radius_positive: bool,
    pub monotone_factor_positive: bool,
    pub in_domain: bool,
}

/// One evaluated point of the curve. Fields that could not be evaluated are NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub theta: f64,
    pub arc_length: f64,
    pub radius: f64,
    pub rho: f64,
    pub phi: f64,
    pub dphi: f64,
    /// Prescribed tangential angle θ + φ.
    pub beta: f64,
    pub x: f64,
    pub y: f64,
    pub flags: SampleFlags,
}

impl CurveSample {
    fn out_of_domain(theta: f64, phi: Option<f64>) -> Self {
        let phi = phi.unwrap_or(f64::NAN);
        CurveSample {
            theta,
            arc_length: f64::NAN,
            radius: f64::NAN,
            rho: f64::NAN,
            phi,
            dphi: f64::NAN,
            beta: theta + phi,
            x: f64::NAN,
            y: f64::NAN,
            flags: SampleFlags {
                rho_positive: false,
                radius_positive: false,
                monotone_factor_positive: false,
                in_domain: false,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Closed form real and φ differentiable.
    InDomain,
    RhoPositive,
    /// 1 + f′(θ) > 0
    MonotoneFactorPositive,
    SinPhiPositive,
    RadiusPositive,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::InDomain,
        Condition::RhoPositive,
        Condition::MonotoneFactorPositive,
        Condition::SinPhiPositive,
        Condition::RadiusPositive,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub condition: Condition,
    pub holds: bool,
    pub first_violation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub grid: usize,
    pub checks: Vec<ConditionCheck>,
}

impl ValidationReport {
    pub fn check(&self, condition: Condition) -> &ConditionCheck {
        &self.checks[condition as usize]
    }

    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}
