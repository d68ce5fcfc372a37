use std::path::Path;
use std::process::{Command, Output};

fn alphasun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphasun"))
        .args(args)
        .env_remove("ALPHASUN_ABS_TOL")
        .env_remove("ALPHASUN_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows of a CSV body, header dropped.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn value(o: &Output) -> f64 {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    rows(&stdout(o))[0][1].parse().unwrap()
}

#[test]
fn density_examples() {
    let v = value(&alphasun(&["density", "--gamma", "0.5", "--alpha", "0", "--x", "1"]));
    assert!((v - 0.5 * (-1.0f64).exp()).abs() < 1e-15);
    // mpmath inversion of the alpha = 1 Mellin transform at 30 digits
    let v = value(&alphasun(&["density", "--gamma", "0.5", "--alpha", "1", "--x", "1"]));
    assert!((v - 0.227969063882998118).abs() < 1e-14);
    let o = alphasun(&["density", "--gamma", "0.5", "--alpha", "0.5", "--x-log", "0.01:100:200"]);
    let text = stdout(&o);
    assert!(text.starts_with("x,value,abs_err,method\n"));
    assert_eq!(rows(&text).len(), 200);
}

#[test]
fn density_methods_agree() {
    let mb = value(&alphasun(&["density", "--gamma", "0.5", "--alpha", "0.5", "--x", "1", "--method", "mb"]));
    let hk = value(&alphasun(&["density", "--gamma", "0.5", "--alpha", "0.5", "--x", "1", "--method", "hankel"]));
    assert!((mb / hk - 1.0).abs() < 1e-3);
    let series = value(&alphasun(&["density", "--gamma", "0.5", "--alpha", "1", "--x", "2", "--method", "series"]));
    let closed = value(&alphasun(&["density", "--gamma", "0.5", "--alpha", "1", "--x", "2", "--method", "closed"]));
    assert!((series - closed).abs() < 1e-13);
}

#[test]
fn transform_examples() {
    let o = alphasun(&["transform", "mellin", "--s", "1"]);
    let h1: f64 = rows(&stdout(&o))[0][2].parse().unwrap();
    assert!((h1 - 1.0).abs() < 1e-12);
    let o = alphasun(&["transform", "mellin", "--re", "0.7", "--im", "0.3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("s_re,s_im,value_re,value_im,abs_err,method\n"));
    assert!((value(&alphasun(&["transform", "laplace", "--alpha", "0", "--z", "1"])) - 0.5).abs() < 1e-15);
    let g = value(&alphasun(&["transform", "generating", "--alpha", "0", "--x", "2"]));
    assert!((g - (-2.0f64).exp()).abs() < 1e-16);
}

#[test]
fn exit_codes() {
    let o = alphasun(&["density", "--gamma", "0.5", "--alpha", "0.3", "--x", "1", "--method", "series"]);
    assert_eq!(o.status.code(), Some(2));
    let o = alphasun(&["--json", "density", "--gamma", "-1", "--alpha", "0.3", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "domain");
    // inside the series radius the continued fraction diverges
    let o = alphasun(&["transform", "laplace", "--gamma", "0.5", "--alpha", "0.5", "--z", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    // the alpha = 1 convergents cancel at small z; auto switches to the Mittag-Leffler form
    let o = alphasun(&["transform", "laplace", "--alpha", "1", "--z", "0.05", "--method", "cf"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(alphasun(&["transform", "laplace", "--alpha", "1", "--z", "0.05"]).status.success());
}

#[test]
fn json_mirrors_csv() {
    let csv = stdout(&alphasun(&["density", "--gamma", "0.75", "--alpha", "0.25", "--x", "0.5,2"]));
    let o = alphasun(&["--json", "density", "--gamma", "0.75", "--alpha", "0.25", "--x", "0.5,2"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["meta"]["params"]["gamma"], 0.75);
    let recs = doc["records"].as_array().unwrap();
    for (r, row) in recs.iter().zip(rows(&csv)) {
        assert_eq!(r["value"].as_f64().unwrap(), row[1].parse::<f64>().unwrap());
        assert_eq!(r["method"], row[3].as_str());
    }
}

#[test]
fn config_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("alphasun.conf");
    std::fs::write(&cfg, "# tolerances\nabs_tol = 1e-9\nrel_tol = 1e-7 # inline\n").unwrap();
    let meta = |extra: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_alphasun"));
        c.env_remove("ALPHASUN_ABS_TOL").env_remove("ALPHASUN_CONFIG");
        if let Some(v) = env {
            c.env("ALPHASUN_ABS_TOL", v);
        }
        let o = c.args(["--json", "--config", cfg.to_str().unwrap()]).args(extra).args(["density", "--alpha", "0", "--x", "1"]).output().unwrap();
        let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        (doc["meta"]["config"]["abs_tol"].as_f64().unwrap(), doc["meta"]["config"]["rel_tol"].as_f64().unwrap())
    };
    assert_eq!(meta(&[], None), (1e-9, 1e-7));
    assert_eq!(meta(&[], Some("1e-8")), (1e-8, 1e-7));
    assert_eq!(meta(&["--abs-tol", "1e-10"], Some("1e-8")), (1e-10, 1e-7));
    std::fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let o = alphasun(&["--config", cfg.to_str().unwrap(), "density", "--x", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validate_single_cell_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = alphasun(&["validate", "--gamma", "0.25", "--alpha", "0.5", "--out-dir", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("validate_summary.json")).unwrap()).unwrap();
    assert!(summary["max_residual_error"].as_f64().unwrap() <= 1e-5);
    assert_eq!(summary["pass"], true);
    for f in ["norm_errors.csv", "residual_errors.csv"] {
        assert_eq!(rows(&std::fs::read_to_string(dir.path().join(f)).unwrap()).len(), 1);
    }
    let o = alphasun(&["validate", "--gamma", "0.25", "--alpha", "0.5", "--threshold", "1e-20", "--out-dir", out]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn simulate_examples() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["simulate", "--alpha", "0", "--gamma", "1", "--n", "1000", "--paths", "10000", "--seed", "7"];
    let o = alphasun(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let ks: f64 = rows(&stdout(&o))[0][6].parse().unwrap();
    assert!(ks < 0.02, "{ks}");

    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let mut v: Vec<&str> = vec!["simulate", "--alpha", "0.5", "--n", "50", "--paths", "300", "--seed", "3", "--samples"];
        v.push(p.to_str().unwrap());
        assert!(alphasun(&v).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let dump = dir.path().join("path.csv");
    let o = alphasun(&["simulate", "--alpha", "0.5", "--n", "10", "--paths", "1", "--dump-path", dump.to_str().unwrap()]);
    assert!(o.status.success());
    let ys: Vec<f64> = rows(&std::fs::read_to_string(&dump).unwrap()).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(ys.len(), 11);
    assert!(ys.windows(2).all(|w| w[1] >= w[0]));
}

fn check_curves(dir: &Path, prefix: &str, expected: usize) {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_str().unwrap().starts_with(prefix))
        .collect();
    files.sort();
    assert_eq!(files.len(), expected);
    for f in files {
        let text = std::fs::read_to_string(&f).unwrap();
        assert!(text.starts_with("x,value,abs_err,method\n"));
        let xs: Vec<f64> = rows(&text).iter().map(|r| r[0].parse().unwrap()).collect();
        assert!(xs.windows(2).all(|w| w[1] > w[0]), "{f:?}");
        assert!(rows(&text).iter().all(|r| r[1].parse::<f64>().unwrap() >= 0.0));
    }
}

#[test]
fn figures_write_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(alphasun(&["figures", "glarge", "--out-dir", out, "--points", "50"]).status.success());
    check_curves(dir.path(), "glarge_", 5);
    assert!(alphasun(&["figures", "g050", "--out-dir", out, "--points", "50"]).status.success());
    check_curves(dir.path(), "g050_", 5);
}

#[test]
fn output_is_byte_stable() {
    let args = ["density", "--gamma", "0.5", "--alpha", "0.25", "--x-log", "0.1:10:7"];
    assert_eq!(alphasun(&args).stdout, alphasun(&args).stdout);
}
