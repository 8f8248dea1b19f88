use std::path::PathBuf;
use std::process::{Command, Output};

use nbsd::BsParams;
use serde_json::Value;

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name);
    p.to_str().unwrap().to_owned()
}

fn nbsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nbsd")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = nbsd(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str], code: i32, needle: &str) {
    let out = nbsd(args);
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {err}");
    assert!(err.contains(needle), "{args:?}: {err}");
    assert!(out.stdout.is_empty());
}

fn temp_file(name: &str, contents: &str) -> String {
    let p = std::env::temp_dir().join(format!("nbsd-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_owned()
}

/// Resolves `urn:nbsd:<name>` to `docs/<name>.schema.json`.
struct Docs;

fn docs_schema(name: &str) -> Value {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs")
        .join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

impl jsonschema::Retrieve for Docs {
    fn retrieve(&self, uri: &jsonschema::Uri<String>) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        match uri.as_str().strip_prefix("urn:nbsd:") {
            Some(name) => Ok(docs_schema(name)),
            None => Err(format!("unknown schema {}", uri.as_str()).into()),
        }
    }
}

fn assert_schema(name: &str, doc: &Value) {
    let v = jsonschema::options()
        .with_retriever(Docs)
        .build(&docs_schema(name))
        .expect("schema compiles");
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

fn iv(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn fit_aluminium() {
    let out: Value = serde_json::from_str(&ok(&["fit", &data("aluminium_coupons.txt")])).unwrap();
    assert_schema("fit_report", &out);
    let (a_lo, a_hi) = iv(&out["alpha_hat"]);
    let (b_lo, b_hi) = iv(&out["beta_hat"]);
    assert_eq!((a_lo, b_lo), (a_hi, b_hi));
    assert!((a_lo - 0.170385).abs() < 1e-6, "{a_lo}");
    assert!((b_lo - 131.8188).abs() < 1e-4, "{b_lo}");
    assert_eq!(out["n"], 101);
    assert_eq!(out["model"], "nbs");
}

#[test]
fn fit_nitrogen_csv() {
    let text = ok(&["fit", &data("nitrogen_oxides.txt"), "--paper-compat-bic", "--format", "csv"]);
    let (header, rows) = csv(&text.replace("nbs,", "0,"));
    assert_eq!(header[0], "model");
    assert_eq!(rows.len(), 1);
    let r = &rows[0];
    let expect = [0.3702, 0.3736, 199.6423, 200.2666, -165.8135, -165.5441, 335.0881, 335.6269, 344.5573, 345.0961];
    for (got, want) in r[2..].iter().zip(expect) {
        assert!((got - want).abs() < 1e-4, "{got} vs {want}");
    }
}

#[test]
fn fit_every_model_and_strategy() {
    let file = data("nitrogen_oxides.txt");
    for model in ["nbs", "nln", "ng", "gamma"] {
        for strategy in ["corners", "endpoints", "random:32", "grid:2"] {
            let out: Value =
                serde_json::from_str(&ok(&["fit", &file, "--model", model, "--strategy", strategy])).unwrap();
            assert_schema("fit_report", &out);
        }
    }
}

#[test]
fn usage_errors_exit_2() {
    let file = data("nitrogen_oxides.txt");
    fails(&["gof", &file, "--reps", "0"], 2, "reps must be ≥ 100");
    fails(&["fit", &file, "--model", "weibull"], 2, "weibull");
    fails(&["fit", &file, "--strategy", "grid:1"], 2, "grid");
    fails(&["fit", "/nonexistent/data.txt"], 2, "cannot read");
    fails(&["simulate", "--alpha", "0.5", "--beta", "1"], 2, "--n");
}

#[test]
fn data_errors_exit_3() {
    fails(&["fit", &temp_file("empty", "")], 3, "insufficient data");
    fails(&["fit", &temp_file("neg", "1\n2\n-3\n")], 3, "line 3");
    fails(&["fit", &temp_file("junk", "1\n[2, x]\n3\n")], 3, "line 2");
    fails(&["gof", &temp_file("flat", "2\n2\n2\n2\n")], 3, "");
    fails(&["curves", "--alpha", "0", "--beta", "1", "--t-min", "1", "--t-max", "2"], 3, "");
}

#[test]
fn gof_aluminium_is_reproducible() {
    let args = ["gof", &data("aluminium_coupons.txt"), "--reps", "500", "--seed", "11"];
    let first = ok(&args);
    assert_eq!(first, ok(&args));
    let out: Value = serde_json::from_str(&first).unwrap();
    assert_schema("gof_result", &out);
    let (ks, _) = iv(&out["ks_star"]);
    assert!((ks - 0.8577896).abs() < 1e-3, "{ks}");
    let (p, _) = iv(&out["p_value"]);
    assert!(p > 0.0 && p < 0.2, "{p}");
    assert_eq!(out["mc_reps"], 500);
    assert_eq!(out["seed"], 11);
}

#[test]
fn compare_lists_every_model() {
    let file = data("nitrogen_oxides.txt");
    let out: Value = serde_json::from_str(&ok(&["compare", &file, "--reps", "200", "--format", "json"])).unwrap();
    assert_schema("compare", &out);
    let models: Vec<&str> = out.as_array().unwrap().iter().map(|r| r["fit"]["model"].as_str().unwrap()).collect();
    assert_eq!(models, ["nbs", "nln", "ng"]);

    let text = ok(&["compare", &file, "--reps", "200"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.split(',').count() == 18));
}

#[test]
fn curves_for_a_point_box_are_degenerate() {
    let text = ok(&["curves", "--alpha", "0.5", "--beta", "2", "--t-min", "0.1", "--t-max", "5", "--points", "50"]);
    let (header, rows) = csv(&text);
    assert_eq!(header, ["t", "f_lo", "f_hi", "F_lo", "F_hi", "h_lo", "h_hi"]);
    assert_eq!(rows.len(), 50);
    let p = BsParams::new(0.5, 2.0).unwrap();
    for r in &rows {
        assert_eq!(r[1], r[2]);
        assert_eq!(r[3], r[4]);
        assert_eq!(r[5], r[6]);
        assert!((r[1] - p.pdf(r[0]).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn curves_bands_cover_interior_parameters() {
    let text = ok(&["curves", "--alpha", "[0.5, 0.75]", "--beta", "1", "--t-min", "0.05", "--t-max", "4", "--points", "200"]);
    let (_, rows) = csv(&text);
    let inner = BsParams::new(0.6, 1.0).unwrap();
    let tol = 1e-12;
    for r in &rows {
        let t = r[0];
        assert!(r[1] - tol <= inner.pdf(t).unwrap() && inner.pdf(t).unwrap() <= r[2] + tol, "pdf at {t}");
        assert!(r[3] - tol <= inner.cdf(t).unwrap() && inner.cdf(t).unwrap() <= r[4] + tol, "cdf at {t}");
        assert!(r[5] - tol <= inner.hazard(t).unwrap() && inner.hazard(t).unwrap() <= r[6] + tol, "hazard at {t}");
    }
    assert!(rows.windows(2).all(|w| w[0][4] <= w[1][4] && w[0][3] <= w[1][3]));
}

#[test]
fn simulate_without_indeterminacy_is_degenerate() {
    let text = ok(&["simulate", "--alpha", "0.5", "--beta", "1", "--n", "20,40", "--reps", "50"]);
    let (header, rows) = csv(&text);
    assert_eq!(header.len(), 14);
    assert_eq!(rows.len(), 2);
    for r in &rows {
        assert_eq!(r[0], 0.0);
        for pair in r[2..].chunks(2) {
            assert_eq!(pair[0], pair[1]);
        }
    }
}

#[test]
fn simulate_is_byte_identical_per_seed() {
    let args = ["simulate", "--alpha", "0.5", "--beta", "1", "--n", "30", "--eps", "0,0.05", "--reps", "60", "--seed", "3"];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let (_, rows) = csv(&a);
    assert_eq!(rows.len(), 2);
    assert!(rows[1][3] > rows[1][2], "positive eps widens NAE");

    let mut other = args;
    other[12] = "4";
    assert_ne!(a, ok(&other));

    let json: Value = serde_json::from_str(&ok(&[&args[..], &["--format", "json"]].concat())).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 2);
    assert_eq!(json[1]["config"]["eps"], 0.05);
}
