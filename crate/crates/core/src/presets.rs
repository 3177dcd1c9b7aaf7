//! Named example configurations, all with a = b = 1, θ₀ = 0.

use crate::curve::{CurveError, CurveParams};
use crate::phi::PhiFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub n: f64,
    pub phi: &'static str,
    pub theta1: f64,
}

impl Preset {
    pub fn params(&self) -> Result<CurveParams, CurveError> {
        let phi = PhiFunction::parse(self.phi).expect("preset expressions parse");
        CurveParams::new(self.n, 1.0, 1.0, 0.0, self.theta1, phi)
    }
}

const fn preset(name: &'static str, n: f64, phi: &'static str, theta1: f64) -> Preset {
    Preset {
        name,
        n,
        phi,
        theta1,
    }
}

/// Logarithmic spiral with φ = π/4 (a = cot φ = 1), the compatible reference.
pub const LOG_SPIRAL: Preset = preset("log-spiral", 1.0, "pi/4", 6.0);

/// Constant, linear and root-shaped φ across both classes and both signs of n.
pub const EXAMPLES: &[Preset] = &[
    preset("n1-half-pi", 1.0, "pi/2", 15.0),
    preset("n1-linear", 1.0, "0.01*theta + 0.3", 15.0),
    preset("n1-fourth-root", 1.0, "theta^0.25 + 3", 15.0),
    preset("n-1-half-pi", -1.0, "pi/2", 15.0),
    preset("n2-eighth-pi", 2.0, "pi/8", 5.0),
    preset("n3-eighth-pi", 3.0, "pi/8", 5.0),
    preset("n-2-eighth-pi", -2.0, "pi/8", 5.0),
    preset("n-3-eighth-pi", -3.0, "pi/8", 5.0),
    preset("n-1-linear", -1.0, "0.01*theta + 0.3", 5.0),
    preset("n-2-linear", -2.0, "0.01*theta + 0.3", 5.0),
    preset("n-3-linear", -3.0, "0.01*theta + 0.3", 5.0),
    preset("n-1-sqrt", -1.0, "sqrt(theta) + 0.6", 5.0),
    preset("n2-sqrt", 2.0, "sqrt(theta) + 0.6", 5.0),
];

pub fn by_name(name: &str) -> Option<Preset> {
    EXAMPLES
        .iter()
        .chain(std::iter::once(&LOG_SPIRAL))
        .find(|p| p.name == name)
        .copied()
}
