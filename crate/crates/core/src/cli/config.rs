//! Run configuration: CLI flags over an optional JSON file over defaults.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::curve::CurveParams;
use crate::phi::PhiFunction;

pub const DEFAULT_A: f64 = 1.0;
pub const DEFAULT_B: f64 = 1.0;
pub const DEFAULT_THETA0: f64 = 0.0;
pub const DEFAULT_SAMPLES: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Output {
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "json")]
    Json,
    #[serde(rename = "svg-curve")]
    SvgCurve,
    #[serde(rename = "svg-rho")]
    SvgRho,
    #[serde(rename = "svg-lcg")]
    SvgLcg,
}

impl Output {
    pub const ALL: [Output; 5] = [
        Output::Csv,
        Output::Json,
        Output::SvgCurve,
        Output::SvgRho,
        Output::SvgLcg,
    ];
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Slope of the logarithmic curvature graph (n != 0)
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<f64>,
    /// Rate of the curvature law rho^n = a L + b [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Intercept of the curvature law, b > 0 [default: 1]
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Start polar angle in radians [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    pub theta0: Option<f64>,
    /// End polar angle in radians
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
    /// Polar tangential angle as an expression in `theta`, e.g. "0.01*theta + 0.3"
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Number of samples on the theta grid [default: 512]
    #[arg(long)]
    pub samples: Option<usize>,
    /// JSON configuration file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory [default: .]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub theta0: Option<f64>,
    pub theta1: Option<f64>,
    pub phi: Option<String>,
    pub samples: Option<usize>,
    pub outputs: Option<Vec<Output>>,
    pub out_dir: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub n: f64,
    pub a: f64,
    pub b: f64,
    pub theta0: f64,
    pub theta1: f64,
    pub phi: String,
    pub samples: usize,
    #[serde(skip)]
    pub outputs: BTreeSet<Output>,
    #[serde(skip)]
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let missing = |name: &str| CliError::Usage(format!("missing required value `--{name}`"));
        let config = RunConfig {
            n: args.n.or(file.n).ok_or_else(|| missing("n"))?,
            a: args.a.or(file.a).unwrap_or(DEFAULT_A),
            b: args.b.or(file.b).unwrap_or(DEFAULT_B),
            theta0: args.theta0.or(file.theta0).unwrap_or(DEFAULT_THETA0),
            theta1: args
                .theta1
                .or(file.theta1)
                .ok_or_else(|| missing("theta1"))?,
            phi: args
                .phi
                .clone()
                .or(file.phi)
                .ok_or_else(|| missing("phi"))?,
            samples: args.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES),
            outputs: file
                .outputs
                .map(|o| o.into_iter().collect())
                .unwrap_or_else(|| Output::ALL.into_iter().collect()),
            out_dir: args
                .out
                .clone()
                .or(file.out_dir)
                .unwrap_or_else(|| PathBuf::from(".")),
        };
        if config.samples < 2 {
            return Err(CliError::Config(format!(
                "samples must be at least 2, got {}",
                config.samples
            )));
        }
        Ok(config)
    }

    /// Parses φ and validates the curve parameters.
    pub fn params(&self) -> Result<CurveParams, CliError> {
        let phi = PhiFunction::parse(&self.phi).map_err(CliError::Parse)?;
        CurveParams::new(self.n, self.a, self.b, self.theta0, self.theta1, phi)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn wants(&self, output: Output) -> bool {
        self.outputs.contains(&output)
    }
}
