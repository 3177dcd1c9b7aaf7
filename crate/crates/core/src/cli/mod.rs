//! The `polar-lac` command line.
//!
//! ```text
//! polar-lac <sample|lcg|verify|svg> --n <f64> --a <f64> --b <f64>
//!     --theta0 <f64> --theta1 <f64> --phi "<expr>"
//!     [--samples N] [--config file.json] [--out DIR]
//! ```
//!
//! Exit codes: 0 success, 1 a hard verification check failed, 2 usage or
//! configuration error, 3 expression parse error, 4 I/O failure, 5 degenerate
//! logarithmic curvature graph.

pub mod config;
pub mod svg;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use clap::{CommandFactory, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::curve::{CurveParams, CurveSample, ValidationReport};
use crate::lcg::{self, LcgLine, LcgPoint};
use crate::oracle::{self, angular_distance, OracleReport, ResidualSummary};
use crate::phi::ParseError;
pub use config::{Output, RunArgs, RunConfig};

/// ODE re-integration vs closed-form arc length, relative.
pub const ODE_TOLERANCE: f64 = 1e-8;
pub const ODE_STEPS: usize = 10_000;
/// Closed-form graph slope and intercept, absolute.
pub const LCG_CLOSED_TOLERANCE: f64 = 1e-9;
pub const LCG_CLOSED_MIN_R_SQUARED: f64 = 1.0 - 1e-12;
/// Traced vs prescribed φ, radians modulo π.
pub const PHI_TOLERANCE: f64 = 1e-5;
/// Numeric graph slope vs n.
pub const LCG_NUMERIC_SLOPE_TOLERANCE: f64 = 1e-3;
pub const LCG_NUMERIC_MIN_R_SQUARED: f64 = 0.999999;
/// ρⁿ against aL + b, in units of machine epsilon.
pub const IDENTITY_ULPS: f64 = 8.0;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot parse phi: {0}")]
    Parse(ParseError),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("degenerate logarithmic curvature graph: {0}")]
    Degenerate(String),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Io(_) => 4,
            CliError::Degenerate(_) => 5,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "polar-lac", version, about = "Polar log-aesthetic curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the curve: samples.csv and samples.json
    Sample(RunArgs),
    /// Logarithmic curvature graphs and their line fits
    Lcg(RunArgs),
    /// Check the closed forms against numeric geometry: verify.json
    Verify(RunArgs),
    /// Plot curve, radius of curvature and curvature graph as SVG
    Svg(RunArgs),
}

impl Command {
    fn args(&self) -> &RunArgs {
        match self {
            Command::Sample(a) | Command::Lcg(a) | Command::Verify(a) | Command::Svg(a) => a,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Sample(_) => "sample",
            Command::Lcg(_) => "lcg",
            Command::Verify(_) => "verify",
            Command::Svg(_) => "svg",
        }
    }
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit code; diagnostics go to standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            report(&e);
            if matches!(e, CliError::Usage(_)) {
                let mut cmd = Cli::command();
                if let Some(sub) = cmd.find_subcommand_mut(cli.command.name()) {
                    eprintln!("\n{}", sub.render_usage());
                }
            }
            e.exit_code()
        }
    }
}

fn report(e: &CliError) {
    use std::io::IsTerminal;
    let color = std::env::var_os("NO_COLOR").is_none() && std::io::stderr().is_terminal();
    if color {
        eprintln!("\x1b[31merror:\x1b[0m {e}");
    } else {
        eprintln!("error: {e}");
    }
}

pub fn run(command: &Command) -> Result<(), CliError> {
    let config = RunConfig::resolve(command.args())?;
    let params = config.params()?;
    match command {
        Command::Sample(_) => cmd_sample(&config, &params),
        Command::Lcg(_) => cmd_lcg(&config, &params),
        Command::Verify(_) => cmd_verify(&config, &params),
        Command::Svg(_) => cmd_svg(&config, &params),
    }
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name))
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

/// 17 significant digits, which round-trips every f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub const SAMPLES_HEADER: &str = "theta,L,R,rho,phi,beta,x,y,in_domain";
pub const LCG_HEADER: &str = "log_rho,log_dL_dlogrho";

/// Row of `samples.csv` / `samples.json`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SampleRow {
    pub theta: f64,
    #[serde(rename = "L")]
    pub arc_length: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub rho: f64,
    pub phi: f64,
    pub beta: f64,
    pub x: f64,
    pub y: f64,
    pub in_domain: bool,
}

impl From<&CurveSample> for SampleRow {
    fn from(s: &CurveSample) -> Self {
        SampleRow {
            theta: s.theta,
            arc_length: s.arc_length,
            radius: s.radius,
            rho: s.rho,
            phi: s.phi,
            beta: s.beta,
            x: s.x,
            y: s.y,
            in_domain: s.flags.in_domain,
        }
    }
}

pub fn samples_csv(samples: &[CurveSample]) -> String {
    let mut out = String::from(SAMPLES_HEADER);
    out.push('\n');
    for s in samples {
        let r = SampleRow::from(s);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.theta),
            fmt_f64(r.arc_length),
            fmt_f64(r.radius),
            fmt_f64(r.rho),
            fmt_f64(r.phi),
            fmt_f64(r.beta),
            fmt_f64(r.x),
            fmt_f64(r.y),
            r.in_domain
        );
    }
    out
}

pub fn lcg_csv(points: &[LcgPoint]) -> String {
    let mut out = String::from(LCG_HEADER);
    out.push('\n');
    for p in points {
        let _ = writeln!(out, "{},{}", fmt_f64(p.x), fmt_f64(p.y));
    }
    out
}

fn sample(config: &RunConfig, params: &CurveParams) -> Result<Vec<CurveSample>, CliError> {
    params
        .sample(config.samples)
        .map_err(|e| CliError::Config(e.to_string()))
}

pub fn cmd_sample(config: &RunConfig, params: &CurveParams) -> Result<(), CliError> {
    let samples = sample(config, params)?;
    if config.wants(Output::Csv) {
        write_atomic(
            &config.out_dir,
            "samples.csv",
            samples_csv(&samples).as_bytes(),
        )?;
    }
    if config.wants(Output::Json) {
        let rows: Vec<SampleRow> = samples.iter().map(SampleRow::from).collect();
        let doc = json!({ "params": config, "rows": rows });
        write_atomic(&config.out_dir, "samples.json", &json_bytes(&doc)?)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct LcgFit {
    pub params: RunConfig,
    pub expected_slope: f64,
    pub expected_intercept: f64,
    pub closed: Option<LcgLine>,
    pub numeric: Option<LcgLine>,
}

pub fn cmd_lcg(config: &RunConfig, params: &CurveParams) -> Result<(), CliError> {
    let closed_points = lcg::lcg_closed_form(params, config.samples);
    write_atomic(
        &config.out_dir,
        "lcg_closed.csv",
        lcg_csv(&closed_points).as_bytes(),
    )?;
    let closed = lcg::linear_fit(&closed_points);

    let report = oracle::compare(params, config.samples);
    let numeric_points = lcg::lcg_numeric(&report);
    let numeric_csv = lcg_csv(numeric_points.as_deref().unwrap_or(&[]));
    write_atomic(&config.out_dir, "lcg_numeric.csv", numeric_csv.as_bytes())?;
    let numeric = numeric_points.and_then(|p| lcg::linear_fit(&p));

    let fit = LcgFit {
        params: config.clone(),
        expected_slope: params.n(),
        expected_intercept: (params.n() / params.a()).abs().ln(),
        closed: closed.as_ref().ok().copied(),
        numeric: numeric.as_ref().ok().copied(),
    };
    write_atomic(&config.out_dir, "lcg_fit.json", &json_bytes(&fit)?)?;
    if let Err(e) = closed {
        return Err(CliError::Degenerate(format!("closed-form graph: {e}")));
    }
    if let Err(e) = numeric {
        return Err(CliError::Degenerate(format!("numeric graph: {e}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    /// Hard checks decide the exit status; soft checks are only reported.
    pub hard: bool,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn at_most(name: &'static str, hard: bool, value: f64, tolerance: f64) -> Self {
        Check {
            name,
            hard,
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    fn at_least(name: &'static str, hard: bool, value: f64, tolerance: f64) -> Self {
        Check {
            name,
            hard,
            value,
            tolerance,
            pass: value >= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub params: RunConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub validation: ValidationReport,
    pub summary: ResidualSummary,
    pub closed_fit: Option<LcgLine>,
    pub numeric_fit: Option<LcgLine>,
    pub rows: Vec<oracle::OracleRow>,
}

/// Runs every check for one configuration.
pub fn verify(config: &RunConfig, params: &CurveParams) -> Result<Verification, CliError> {
    let samples = sample(config, params)?;
    let mut notes = Vec::new();
    let mut checks = Vec::new();

    // ODE vs closed form at the last in-domain sample
    let domain_end = params.domain_end();
    let end = samples
        .iter()
        .rev()
        .find(|s| s.theta <= domain_end && s.theta > params.theta0())
        .map(|s| s.theta);
    if domain_end < params.theta1() {
        notes.push(format!(
            "closed form leaves its real domain at theta = {domain_end}; checks use [theta0, {domain_end}]"
        ));
    }
    let ode_error = match end {
        Some(end) => match (
            oracle::ode_arc_length_to(params, end, ODE_STEPS),
            params.arc_length(end),
        ) {
            (Ok(ode), Ok(closed)) => {
                let d = (ode.final_value() - closed).abs();
                if closed != 0.0 {
                    d / closed.abs()
                } else {
                    d
                }
            }
            (Err(e), _) => {
                notes.push(format!("ODE re-integration failed: {e}"));
                f64::INFINITY
            }
            (_, Err(e)) => {
                notes.push(format!("closed form failed at {end}: {e}"));
                f64::INFINITY
            }
        },
        None => f64::INFINITY,
    };
    checks.push(Check::at_most(
        "ode_vs_closed_arc_length",
        true,
        ode_error,
        ODE_TOLERANCE,
    ));

    // ρⁿ = aL + b
    let identity = samples
        .iter()
        .filter(|s| s.flags.in_domain)
        .map(|s| {
            let law = params.a() * s.arc_length + params.b();
            (s.rho.powf(params.n()) - law).abs() / (law * f64::EPSILON * params.n().abs().max(1.0))
        })
        .fold(0.0, f64::max);
    checks.push(Check::at_most(
        "curvature_law_identity_ulps",
        true,
        identity,
        IDENTITY_ULPS,
    ));

    let closed_fit = lcg::linear_fit(&lcg::lcg_closed_form(params, config.samples)).ok();
    let expected_intercept = (params.n() / params.a()).abs().ln();
    let (slope_err, intercept_err, r2) =
        closed_fit.map_or((f64::INFINITY, f64::INFINITY, 0.0), |f| {
            (
                (f.slope - params.n()).abs(),
                (f.intercept - expected_intercept).abs(),
                f.r_squared,
            )
        });
    checks.push(Check::at_most(
        "lcg_closed_slope",
        true,
        slope_err,
        LCG_CLOSED_TOLERANCE,
    ));
    checks.push(Check::at_most(
        "lcg_closed_intercept",
        true,
        intercept_err,
        LCG_CLOSED_TOLERANCE,
    ));
    checks.push(Check::at_least(
        "lcg_closed_r_squared",
        true,
        r2,
        LCG_CLOSED_MIN_R_SQUARED,
    ));

    let report: OracleReport = oracle::compare(params, config.samples);
    let last = report.rows.len().saturating_sub(1);
    let phi_gap = report
        .rows
        .iter()
        .enumerate()
        .filter(|(i, r)| *i != 0 && *i != last && !r.degenerate)
        .map(|(_, r)| angular_distance(r.phi_actual, r.phi_prescribed))
        .fold(0.0, f64::max);
    let phi_check = Check::at_most("phi_actual_vs_prescribed", false, phi_gap, PHI_TOLERANCE);
    if !phi_check.pass {
        notes.push(format!(
            "traced tangential angle differs from the prescribed phi by up to {phi_gap:.3e} rad; \
             the closed-form L is the model arc-length parameter, not the geometric length of the trace"
        ));
    }
    checks.push(phi_check);

    let numeric_fit = lcg::lcg_numeric(&report).and_then(|p| lcg::linear_fit(&p));
    match &numeric_fit {
        Ok(f) => {
            checks.push(Check::at_most(
                "lcg_numeric_slope",
                false,
                (f.slope - params.n()).abs(),
                LCG_NUMERIC_SLOPE_TOLERANCE,
            ));
            checks.push(Check::at_least(
                "lcg_numeric_r_squared",
                false,
                f.r_squared,
                LCG_NUMERIC_MIN_R_SQUARED,
            ));
        }
        Err(e) => notes.push(format!("numeric curvature graph unavailable: {e}")),
    }
    let degenerate = report.rows.iter().filter(|r| r.degenerate).count();
    if degenerate > 0 {
        notes.push(format!(
            "{degenerate} oracle rows are degenerate and excluded"
        ));
    }

    let passed = checks.iter().filter(|c| c.hard).all(|c| c.pass);
    Ok(Verification {
        params: config.clone(),
        passed,
        checks,
        notes,
        validation: params.validate(),
        summary: report.summary,
        closed_fit,
        numeric_fit: numeric_fit.ok(),
        rows: report.rows,
    })
}

pub fn cmd_verify(config: &RunConfig, params: &CurveParams) -> Result<(), CliError> {
    let v = verify(config, params)?;
    write_atomic(&config.out_dir, "verify.json", &json_bytes(&v)?)?;
    if v.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = v
            .checks
            .iter()
            .filter(|c| c.hard && !c.pass)
            .map(|c| c.name)
            .collect();
        Err(CliError::VerifyFailed(failed.join(", ")))
    }
}

pub fn cmd_svg(config: &RunConfig, params: &CurveParams) -> Result<(), CliError> {
    let samples = sample(config, params)?;
    if !samples.iter().any(|s| s.flags.in_domain) {
        return Err(CliError::Config(
            "every sample is outside the domain of the curve; nothing to plot".into(),
        ));
    }
    let valid = || samples.iter().filter(|s| s.flags.in_domain);
    let panels = [
        (
            Output::SvgCurve,
            "curve.svg",
            valid().map(|s| (s.x, s.y)).collect::<Vec<_>>(),
            svg::Aspect::Equal,
        ),
        (
            Output::SvgRho,
            "rho.svg",
            valid().map(|s| (s.theta, s.rho)).collect(),
            svg::Aspect::Fill,
        ),
        (
            Output::SvgLcg,
            "lcg.svg",
            lcg::lcg_closed_form(params, config.samples)
                .iter()
                .map(|p| (p.x, p.y))
                .collect(),
            svg::Aspect::Fill,
        ),
    ];
    for (output, name, points, aspect) in panels {
        if !config.wants(output) {
            continue;
        }
        let doc = svg::polyline(&points, aspect)
            .ok_or_else(|| CliError::Config(format!("no finite points for {name}")))?;
        write_atomic(&config.out_dir, name, doc.as_bytes())?;
    }
    Ok(())
}
