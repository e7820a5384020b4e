use std::path::Path;
use std::process::{Command, Output};

const LINK: &str = r#""link":{"theta":1,"R":1,"pathloss":{"kind":"unbounded","alpha":4}}"#;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sirasym"))
        .args(args)
        .current_dir(dir)
        .env_remove("SIRASYM_THREADS")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header: Vec<String> = r.headers().unwrap().iter().map(String::from).collect();
    let mut rows = vec![header];
    rows.extend(r.records().map(|x| x.unwrap().iter().map(String::from).collect()));
    rows
}

#[test]
fn empty_grid_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        &format!(r#"{{"scenario":{{"process":"ppp_aloha","p":0.1}},{LINK},"sweep":{{"eta":[]}}}}"#),
    );
    let out = run(&["simulate-outage", "--config", &cfg, "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep.eta"));
}

#[test]
fn schema_violations_report_location() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        &format!("{{\"scenario\":{{\"process\":\"ppp_aloha\",\"p\":0.1}},\n{LINK},\n\"budget\":{{\"samplez\":3}}}}"),
    );
    let out = run(&["gamma", "--config", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("samplez"), "{err}");
    let missing = run(&["tc"], tmp.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn simulate_outage_matches_poisson_formula_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        &format!(
            r#"{{"scenario":{{"process":"ppp_aloha","p":0.1}},{LINK},"sweep":{{"eta":[0.01,0.05]}},
               "budget":{{"samples":20000,"truncation_tol":1e-4}},"seed":5}}"#
        ),
    );
    let a = run(&["simulate-outage", "--config", &cfg, "--out", "a"], tmp.path());
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&["simulate-outage", "--config", &cfg, "--out", "b", "--threads", "2"], tmp.path());
    assert!(b.status.success());
    let fa = std::fs::read(tmp.path().join("a/simulate_outage.csv")).unwrap();
    let fb = std::fs::read(tmp.path().join("b/simulate_outage.csv")).unwrap();
    assert_eq!(fa, fb);

    let rows = read_csv(&tmp.path().join("a/simulate_outage.csv"));
    assert_eq!(
        rows[0].join(","),
        "process,params,eta,theta,alpha,R,N,ps,se,bias_bound,samples,seed"
    );
    for row in &rows[1..] {
        let eta: f64 = row[2].parse().unwrap();
        let ps: f64 = row[7].parse().unwrap();
        let se: f64 = row[8].parse().unwrap();
        let bias: f64 = row[9].parse().unwrap();
        let exact = (-eta * std::f64::consts::PI.powi(2) / 2.0).exp();
        assert!((ps - exact).abs() < 3.0 * se + bias, "eta {eta}: {ps} vs {exact}");
    }

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("a/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 5);
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(manifest["row_seeds"].as_array().unwrap().len(), 2);

    let c = run(&["simulate-outage", "--config", &cfg, "--out", "c", "--seed", "6"], tmp.path());
    assert!(c.status.success());
    assert_ne!(fa, std::fs::read(tmp.path().join("c/simulate_outage.csv")).unwrap());
}

#[test]
fn tc_and_bounds_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        &format!(
            r#"{{"scenario":{{"process":"ppp_aloha","p":0.1}},{LINK},
               "sweep":{{"eta":[0.01,0.05],"epsilon":[0.05,0.1]}},
               "budget":{{"samples":5000,"simulate_tc":false}}}}"#
        ),
    );
    let t = run(&["tc", "--config", &cfg, "--out", "o"], tmp.path());
    assert!(t.status.success(), "{}", String::from_utf8_lossy(&t.stderr));
    let rows = read_csv(&tmp.path().join("o/tc.csv"));
    assert_eq!(rows[0].join(","), "epsilon,tc_asym,tc_sim,tc_sim_ci,tcl,tcu");
    for row in &rows[1..] {
        assert!(row[2].is_empty());
        let tcl: f64 = row[4].parse().unwrap();
        let tcu: f64 = row[5].parse().unwrap();
        assert!(tcl <= tcu);
    }
    let b = run(&["bounds", "--config", &cfg, "--out", "o"], tmp.path());
    assert!(b.status.success());
    let rows = read_csv(&tmp.path().join("o/bounds.csv"));
    assert_eq!(rows.len(), 3);
    let g = run(&["gamma", "--config", &cfg, "--out", "o"], tmp.path());
    assert!(g.status.success());
    let rows = read_csv(&tmp.path().join("o/gamma.csv"));
    let gamma: f64 = rows[1][7].parse().unwrap();
    assert!((gamma - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-8);
}

#[test]
fn cluster_mac_gamma_is_unsupported() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        &format!(
            r#"{{"scenario":{{"process":"cluster_mac","cluster":{{"parent_density":1,"mean_cluster_size":5,"spread":1}},"q":0.1}},{LINK}}}"#
        ),
    );
    let out = run(&["gamma", "--config", &cfg, "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_writes_patterns() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        &format!(
            r#"{{"scenario":{{"process":"matern_csma","a":1}},{LINK},"sweep":{{"a":[1,2]}},"sample":{{"half_width":8}}}}"#
        ),
    );
    let out = run(&["sample", "--config", &cfg, "--out", "o"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_csv(&tmp.path().join("o/sample.csv"));
    assert_eq!(rows.len(), 3);
    assert!(tmp.path().join("o/sample_001.csv").exists());
    assert!(tmp.path().join("o/sample_001.json").exists());
}

#[test]
fn diagnostics_emit_trends() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        &format!(r#"{{"scenario":{{"process":"ppp_aloha","p":0.1}},{LINK},"sweep":{{"eta":[0.005,0.01,0.02]}}}}"#),
    );
    let out = run(&["diagnostics", "--config", &cfg, "--out", "o"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let trends: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("o/diagnostics_trends.json")).unwrap()).unwrap();
    assert_eq!(trends["c2_vanishing"], true);
    let rows = read_csv(&tmp.path().join("o/diagnostics.csv"));
    assert_eq!(rows[0].join(","), "eta,b1,b2_r0.5,b2_r1,b2_r2,c1,c2,mu,sigma,ps,ps_se");
}

#[test]
fn reference_suite_passes_and_flags_corrupted_tolerance() {
    let tmp = tempfile::tempdir().unwrap();
    let ok = write_config(
        tmp.path(),
        "ok.json",
        &format!(r#"{{"scenario":{{"process":"ppp_aloha","p":0.1}},{LINK},"budget":{{"samples":2000}},"suite":{{"simulate":false}}}}"#),
    );
    let out = run(&["reference-suite", "--config", &ok, "--out", "ok"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for t in ["reference_aloha_gamma", "reference_csma_gamma", "reference_tc"] {
        assert!(tmp.path().join(format!("ok/{t}.csv")).exists(), "{t}");
    }
    let bad = write_config(
        tmp.path(),
        "bad.json",
        &format!(
            r#"{{"scenario":{{"process":"ppp_aloha","p":0.1}},{LINK},"budget":{{"samples":2000}},
               "suite":{{"simulate":false,"tolerances":{{"aloha_gamma_rel":0}}}}}}"#
        ),
    );
    let out = run(&["reference-suite", "--config", &bad, "--out", "bad"], tmp.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(tmp.path().join("bad/manifest.json").exists());
}
