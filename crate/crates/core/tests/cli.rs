use std::path::Path;
use std::process::{Command, Output};

use polar_lac::{CurveParams, PhiFunction};
use serde_json::Value;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polar-lac"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const HALF_PI: &[&str] = &["--n", "1", "--theta1", "15", "--phi", "pi/2"];
const LINEAR: &[&str] = &["--n", "1", "--theta1", "15", "--phi", "0.01*theta + 0.3"];
const INWARD: &[&str] = &["--n", "-1", "--theta1", "15", "--phi", "pi/2"];

fn with<'a>(cmd: &'a str, base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend_from_slice(base);
    v.extend_from_slice(extra);
    v
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema(schema: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schema")
        .join(schema);
    let schema: Value = json(&path);
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

#[test]
fn sample_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&with("sample", HALF_PI, &["--samples", "2"]), dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("samples.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("theta,L,R,rho,phi,beta,x,y,in_domain"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(first[1].parse::<f64>().unwrap(), 0.0);
    assert_eq!(first[2].parse::<f64>().unwrap(), 1.0);
    assert_eq!(first[8], "true");
    assert_eq!(lines.count(), 1);

    let doc = json(&dir.path().join("samples.json"));
    assert_eq!(doc["params"]["phi"], "pi/2");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
    assert_schema("samples.schema.json", &doc);
}

#[test]
fn csv_round_trip_is_lossless() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&with("sample", LINEAR, &["--samples", "97"]), dir.path());
    assert!(o.status.success());
    let params = CurveParams::new(
        1.0,
        1.0,
        1.0,
        0.0,
        15.0,
        PhiFunction::parse("0.01*theta + 0.3").unwrap(),
    )
    .unwrap();
    let csv = std::fs::read_to_string(dir.path().join("samples.csv")).unwrap();
    let mut prev = f64::NEG_INFINITY;
    for line in csv.lines().skip(1) {
        let cols: Vec<f64> = line
            .split(',')
            .take(8)
            .map(|c| c.parse().unwrap())
            .collect();
        assert!(cols[0] > prev);
        prev = cols[0];
        let s = params.evaluate(cols[0]).unwrap();
        let expected = [
            s.theta,
            s.arc_length,
            s.radius,
            s.rho,
            s.phi,
            s.beta,
            s.x,
            s.y,
        ];
        for (got, want) in cols.iter().zip(expected) {
            assert_eq!(got.to_bits(), want.to_bits(), "{line}");
        }
    }
}

#[test]
fn missing_phi_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sample", "--n", "1", "--theta1", "15"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--phi"));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn parse_error_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["sample", "--n", "1", "--theta1", "15", "--phi", "theta +"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("offset 7"), "{}", stderr(&o));
    assert!(!stderr(&o).contains('\x1b'));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["sample", "--n", "0", "--theta1", "15", "--phi", "pi/2"][..],
        &[
            "sample", "--n", "1", "--b", "-1", "--theta1", "15", "--phi", "pi/2",
        ],
        &["sample", "--n", "1", "--theta1", "-1", "--phi", "pi/2"],
        &["sample", "--n", "1", "--theta1", "15", "--phi", "ln(theta)"],
        &["sample", "--n", "abc", "--theta1", "15", "--phi", "pi/2"],
        &[
            "sample",
            "--n",
            "1",
            "--theta1",
            "15",
            "--phi",
            "pi/2",
            "--samples",
            "1",
        ],
        &["bogus"],
    ] {
        let o = run(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn io_failure_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = run(&with("sample", HALF_PI, &[]), &blocker.join("sub"));
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));

    let o = run(&["sample", "--config", "/nonexistent/cfg.json"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"n": -1, "a": 2, "theta1": 5, "phi": "pi/8", "samples": 3, "outputs": ["json"]}"#,
    )
    .unwrap();
    let o = run(
        &[
            "sample",
            "--config",
            cfg.to_str().unwrap(),
            "--a",
            "1",
            "--samples",
            "4",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(!dir.path().join("samples.csv").exists());
    let doc = json(&dir.path().join("samples.json"));
    assert_eq!(doc["params"]["n"], -1.0);
    assert_eq!(doc["params"]["a"], 1.0);
    assert_eq!(doc["params"]["b"], 1.0);
    assert_eq!(doc["params"]["samples"], 4);

    std::fs::write(&cfg, r#"{"n": 1, "theta1": 5, "phi": "pi/8", "colour": 3}"#).unwrap();
    let o = run(&["sample", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lcg_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&with("lcg", HALF_PI, &["--samples", "128"]), dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["lcg_closed.csv", "lcg_numeric.csv"] {
        let csv = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(csv.starts_with("log_rho,log_dL_dlogrho\n"));
    }
    let fit = json(&dir.path().join("lcg_fit.json"));
    assert_schema("lcg_fit.schema.json", &fit);
    assert!((fit["closed"]["slope"].as_f64().unwrap() - 1.0).abs() <= 1e-9);
    assert_eq!(fit["expected_slope"], 1.0);

    let o = run(&with("lcg", INWARD, &["--samples", "128"]), dir.path());
    assert!(o.status.success());
    let fit = json(&dir.path().join("lcg_fit.json"));
    assert!(fit["closed"]["intercept"].as_f64().unwrap().abs() <= 1e-9);
}

#[test]
fn lcg_of_circle_exits_5() {
    // a so small that aL + b rounds to b: constant radius, a circle
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "lcg",
            "--n",
            "1",
            "--a",
            "1e-300",
            "--theta1",
            "6",
            "--phi",
            "pi/2",
            "--samples",
            "64",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(5), "{}", stderr(&o));
    let fit = json(&dir.path().join("lcg_fit.json"));
    assert!(fit["numeric"].is_null());
}

#[test]
fn verify_inward_spiral_reports_phi_gap() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&with("verify", INWARD, &["--samples", "128"]), dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&dir.path().join("verify.json"));
    assert_schema("verify.schema.json", &v);
    let check = |name: &str| {
        v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .cloned()
            .unwrap()
    };
    assert_eq!(check("ode_vs_closed_arc_length")["pass"], true);
    assert_eq!(check("phi_actual_vs_prescribed")["pass"], false);
    assert_eq!(check("phi_actual_vs_prescribed")["hard"], false);
    assert!(v["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().contains("prescribed phi")));
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_compatible_spiral() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "verify",
            "--n",
            "1",
            "--theta1",
            "6",
            "--phi",
            "pi/4",
            "--samples",
            "128",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let v = json(&dir.path().join("verify.json"));
    let phi = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "phi_actual_vs_prescribed")
        .unwrap();
    assert_eq!(phi["pass"], true);
    assert!(phi["value"].as_f64().unwrap() <= 1e-5);
}

fn polyline_points(svg: &str) -> usize {
    let pts = svg
        .split("points=\"")
        .nth(1)
        .unwrap()
        .split('"')
        .next()
        .unwrap();
    pts.split(' ').count()
}

#[test]
fn svg_panels() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&with("svg", HALF_PI, &[]), dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    for name in ["curve.svg", "rho.svg", "lcg.svg"] {
        let svg = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(svg.contains("version=\"1.1\""));
        assert!(!svg.contains("href"));
        assert_eq!(polyline_points(&svg), 512, "{name}");
    }
}

#[test]
fn svg_with_no_valid_samples_exits_2() {
    // R(0) is singular (sqrt at 0) and the power base dies before the next sample
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "svg",
            "--n",
            "-1",
            "--a",
            "-100",
            "--theta1",
            "5",
            "--phi",
            "sqrt(theta) + 0.6",
            "--samples",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("outside the domain"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        assert!(run(&with("svg", LINEAR, &[]), dir).status.success());
        assert!(run(&with("sample", LINEAR, &[]), dir).status.success());
    }
    for name in [
        "curve.svg",
        "rho.svg",
        "lcg.svg",
        "samples.csv",
        "samples.json",
    ] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
}
