use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn finterp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finterp")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn mv_report_defaults() {
    let out = finterp(&["interp", "mv-report"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!((v["h0"].as_u64(), v["h1"].as_u64()), (Some(1), Some(0)));
}

#[test]
fn invalid_parity_is_usage_error() {
    let out = finterp(&["interp", "design", "--parity", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parity"));
}

#[test]
fn bad_run_target_and_config_are_usage_errors() {
    assert_eq!(finterp(&["run", "11"]).status.code(), Some(2));
    let dir = scratch("bad-config");
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 1, "n_maks": 3}"#).unwrap();
    assert_eq!(finterp(&["--config", s(&cfg), "interp", "mv-report"]).status.code(), Some(2));
    assert_eq!(finterp(&["--grid-n", "7", "interp", "mv-report"]).status.code(), Some(2));
}

#[test]
fn gk_commands() {
    let v = json(&finterp(&["gk", "casimir", "--kind", "lowest", "--weight", "1/2"]));
    assert_eq!(v["casimir"], "-3/8");
    let v = json(&finterp(&["gk", "complement", "--kind", "lowest", "--weight", "1/2"]));
    assert_eq!((v["complement"]["kind"].as_str(), v["complement"]["weight"].as_str()), (Some("highest"), Some("-3/2")));
    let v = json(&finterp(&["gk", "ps", "--zeta0", "0", "--xi", "1"]));
    assert_eq!(v["case"], "C");
    assert_eq!(v["factors"].as_array().unwrap().len(), 3);
    let v = json(&finterp(&["gk", "ext1", "--w-kind", "lowest", "--w-weight", "1/2", "--v-kind", "highest", "--v-weight", "-3/2"]));
    assert_eq!((v["ext1_dim"].as_u64(), v["weight_criterion"].as_u64()), (Some(1), Some(1)));
    assert_eq!(finterp(&["gk", "casimir", "--kind", "lowest", "--weight", "x/2"]).status.code(), Some(2));
}

#[test]
fn sample_and_reconstruct_pipeline() {
    let dir = scratch("pipeline");
    let (f, smp, coeffs) = (dir.join("f.json"), dir.join("s.json"), dir.join("c.json"));
    assert!(finterp(&["osc", "generate", "--kind", "hermite", "--k", "6", "--out", s(&f)]).status.success());
    let p = json(&finterp(&["osc", "poisson", "--input", s(&f)]));
    let re = p["residual"][0].as_f64().unwrap();
    assert!(re.abs() < 1e-10, "{re}");
    assert!(finterp(&["osc", "sample", "--input", s(&f), "--nmax", "40", "--out", s(&smp)]).status.success());
    let out = finterp(&["interp", "reconstruct", "--samples", s(&smp), "--kmax", "24", "--out", s(&coeffs)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let c: Value = serde_json::from_str(&std::fs::read_to_string(&coeffs).unwrap()).unwrap();
    let re: Vec<f64> = c["re"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    for (k, x) in re.iter().enumerate() {
        let want = if k == 3 { 1.0 } else { 0.0 };
        assert!((x - want).abs() < 1e-6, "coefficient {k} = {x}");
    }
}

#[test]
fn design_writes_singular_value_csv() {
    let dir = scratch("design");
    let csv = dir.join("svd.csv");
    let v = json(&finterp(&["interp", "design", "--nmax", "40", "--kmax", "24", "--out", s(&csv)]));
    assert_eq!((v["kernel_dim"].as_u64(), v["left_kernel_dim"].as_u64()), (Some(0), Some(1)));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("index,singular_value\n"));
    assert_eq!(text.lines().count(), 25);
}

#[test]
fn cohomology_of_rep_file() {
    let dir = scratch("cohom");
    let rep = dir.join("rep.json");
    std::fs::write(&rep, r#"{"dim": 2, "rho_e": [[1, 1], [0, 1]], "rho_f": [["1/2", 0], [0, 2]]}"#).unwrap();
    let v = json(&finterp(&["cohom", "--rep", s(&rep)]));
    assert_eq!((v["h0"].as_u64(), v["h1"].as_u64()), (Some(0), Some(2)));
    assert_eq!(v["bar_resolution"], serde_json::json!([0, 2]));
    std::fs::write(&rep, r#"{"dim": 1, "rho_e": [[1]], "rho_f": [[1]]}"#).unwrap();
    let v = json(&finterp(&["cohom", "--rep", s(&rep)]));
    assert_eq!((v["h0"].as_u64(), v["h1"].as_u64()), (Some(1), Some(2)));
    std::fs::write(&rep, r#"{"dim": 1, "rho_e": [[0]], "rho_f": [[1]]}"#).unwrap();
    assert_eq!(finterp(&["cohom", "--rep", s(&rep)]).status.code(), Some(2));
}

#[test]
fn cusp_solve_from_bump() {
    let dir = scratch("cusp");
    let (f, g) = (dir.join("f.json"), dir.join("g.json"));
    assert!(finterp(&["--seed", "3", "cusp", "bump", "--out", s(&f)]).status.success());
    let out = finterp(&["cusp", "solve", "--lambda", "-0.375", "--input", s(&f), "--out", s(&g), "--residual-report"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["roots"]["p1"], serde_json::json!([0.75, 0.0]));
    let g: Value = serde_json::from_str(&std::fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(g["N"].as_u64(), Some(8001));
}

#[test]
fn heisenberg_table() {
    let dir = scratch("heis");
    let table = dir.join("t.csv");
    let v = json(&finterp(&["heis", "relations", "--radius", "16", "--tdepth", "16", "--table", s(&table)]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let text = std::fs::read_to_string(&table).unwrap();
    assert!(text.starts_with("R,T,r_A,r_I,r_J\n1,1,"));
}

#[test]
fn run_is_reproducible() {
    let (a, b) = (scratch("run-a"), scratch("run-b"));
    for dir in [&a, &b] {
        let out = finterp(&["run", "6", "--seed", "11", "--out-dir", s(dir)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let read = |d: &Path| std::fs::read(d.join("report.json")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert!(a.join("criterion-06.json").exists() && a.join("report.csv").exists());
}

#[test]
fn literal_intertwining_failure_exits_one() {
    let dir = scratch("run-1");
    let out = finterp(&["run", "1", "--out-dir", s(&dir)]);
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&std::fs::read(dir.join("report.json")).unwrap()).unwrap();
    let failing: Vec<&str> = v["criteria"][0]["metrics"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|m| m["ok"] == false)
        .map(|m| m["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["sigma X sigma^-1 - Y"]);
}
