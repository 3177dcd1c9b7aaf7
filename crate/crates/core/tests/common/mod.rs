use std::f64::consts::PI;

use polar_lac::PhiFunction;

/// SplitMix64; enough to spread test points deterministically.
pub struct Points(u64);

impl Points {
    pub fn next_unit(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }
}

pub type Reference = fn(f64) -> f64;

/// Expression, reference value, interval where it is smooth.
pub const CORPUS: &[(&str, Reference, (f64, f64))] = &[
    ("pi/2", |_| PI / 2.0, (-10.0, 10.0)),
    ("pi/8", |_| PI / 8.0, (-10.0, 10.0)),
    ("0.01*theta + 0.3", |t| 0.01 * t + 0.3, (-10.0, 10.0)),
    ("theta^0.25 + 3", |t| t.powf(0.25) + 3.0, (0.05, 15.0)),
    ("sqrt(theta) + 0.6", |t| t.sqrt() + 0.6, (0.05, 15.0)),
    ("0.2*theta + pi/24", |t| 0.2 * t + PI / 24.0, (-10.0, 10.0)),
    ("theta", |t| t, (-10.0, 10.0)),
    ("-theta", |t| -t, (-10.0, 10.0)),
    ("theta^2", |t| t * t, (-10.0, 10.0)),
    ("2*theta^2", |t| 2.0 * t * t, (-10.0, 10.0)),
    ("theta^3 - theta", |t| t.powi(3) - t, (-5.0, 5.0)),
    ("-theta^2", |t| -(t * t), (-10.0, 10.0)),
    ("sin(theta)", f64::sin, (-10.0, 10.0)),
    ("cos(theta)", f64::cos, (-10.0, 10.0)),
    (
        "sin(theta)*cos(theta)",
        |t| t.sin() * t.cos(),
        (-10.0, 10.0),
    ),
    ("exp(-theta)", |t| (-t).exp(), (-5.0, 10.0)),
    ("exp(0.1*theta)", |t| (0.1 * t).exp(), (-10.0, 10.0)),
    ("ln(theta)", f64::ln, (0.1, 20.0)),
    ("ln(1 + theta^2)", |t| (1.0 + t * t).ln(), (-10.0, 10.0)),
    ("1/(1 + theta)", |t| 1.0 / (1.0 + t), (0.0, 10.0)),
    ("theta/(theta^2 + 1)", |t| t / (t * t + 1.0), (-10.0, 10.0)),
    ("sqrt(1 + theta^2)", |t| (1.0 + t * t).sqrt(), (-10.0, 10.0)),
    ("theta^theta", |t| t.powf(t), (0.2, 4.0)),
    ("2^theta", |t| 2f64.powf(t), (-5.0, 5.0)),
    ("theta^-1", |t| 1.0 / t, (0.2, 10.0)),
    ("theta^1.5", |t| t.powf(1.5), (0.05, 10.0)),
    (
        "(theta - 1)^2 / 4",
        |t| (t - 1.0).powi(2) / 4.0,
        (-10.0, 10.0),
    ),
    (
        "0.5*sin(2*theta) + pi/3",
        |t| 0.5 * (2.0 * t).sin() + PI / 3.0,
        (-10.0, 10.0),
    ),
    (
        "exp(sin(theta)) - 1",
        |t| t.sin().exp() - 1.0,
        (-10.0, 10.0),
    ),
    ("1.5e-1*theta - -2", |t| 0.15 * t + 2.0, (-10.0, 10.0)),
];

/// Checks every corpus entry against its reference at 100 points: value to
/// 1e-12 and derivative against a central difference to 1e-6.
pub fn check_corpus() -> Result<(), String> {
    let mut points = Points(0x5eed);
    for &(src, reference, (lo, hi)) in CORPUS {
        let f = PhiFunction::parse(src).map_err(|e| format!("{src}: {e}"))?;
        for _ in 0..100 {
            let theta = lo + (hi - lo) * points.next_unit();
            let v = f
                .eval_with_derivative(theta)
                .map_err(|e| format!("{src}: {e}"))?;
            let (value, slope) = (v.phi, v.dphi_dtheta);
            let want = reference(theta);
            if (value - want).abs() > 1e-12 * want.abs().max(1.0) {
                return Err(format!("{src} at {theta}: {value} vs {want}"));
            }
            let h = 1e-6 * theta.abs().max(1.0);
            let fd = (reference(theta + h) - reference(theta - h)) / (2.0 * h);
            if (slope - fd).abs() > 1e-6 * fd.abs().max(1.0) {
                return Err(format!("{src}' at {theta}: {slope} vs {fd}"));
            }
        }
    }
    Ok(())
}
