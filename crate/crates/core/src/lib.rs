//! Polar log-aesthetic curves.
//!
//! Curves whose radius of curvature follows ρⁿ = aL + b while the angle between
//! tangent and radius follows a user expression φ = f(θ). The crate provides
//!
//! - [`phi`]: the φ(θ) expression language with exact first derivatives,
//! - [`curve`]: closed-form arc length, radius and sampling,
//! - [`oracle`]: numeric differential geometry of the traced curve,
//! - [`lcg`]: logarithmic curvature graphs and their line fits,
//! - [`cli`]: the `polar-lac` command line and its file formats.

// `!(x > y)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod curve;
pub mod lcg;
pub mod oracle;
pub mod phi;
pub mod presets;

pub use curve::{CurveClass, CurveError, CurveParams, CurveSample};
pub use lcg::{LcgLine, LcgPoint};
pub use oracle::OracleReport;
pub use phi::{PhiFunction, PhiValue};
