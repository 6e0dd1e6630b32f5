use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coulomb-lab"))
}

#[test]
fn norms_gaussian_json() {
    let out = bin()
        .args(["norms", "--profile", "builtin:gaussian", "--s", "1", "--p", "2,4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let l2 = v["lp_2"].as_f64().unwrap();
    assert!((l2 - 2.35974).abs() < 1e-4);
    assert!(v["coulomb_agreement"].as_f64().unwrap() < 1e-6);
}

#[test]
fn norms_tent_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tent.json");
    std::fs::write(&path, r#"{"type":"tent","epsilon":1.0,"R":2.0,"S":1.0}"#).unwrap();
    let out = bin()
        .args(["norms", "--profile", path.to_str().unwrap(), "--s", "0.75", "--p", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let l2 = v["lp_2"].as_f64().unwrap();
    let want = (164.0 * std::f64::consts::PI / 15.0).sqrt();
    assert!((l2 - want).abs() / want < 1e-8);
}

#[test]
fn norms_malformed_profile_exits_2() {
    let out = bin()
        .args(["norms", "--profile", "{not json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn sweep_writes_deterministic_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let run = || {
        let out = bin()
            .args([
                "sweep", "--s", "1", "--p", "2.4", "--eps", "0.2,0.1,0.05,0.02,0.01",
                "--out", path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        (std::fs::read(&path).unwrap(), out.stdout)
    };
    let (csv1, summary1) = run();
    let (csv2, _) = run();
    assert_eq!(csv1, csv2);
    let text = String::from_utf8(csv1).unwrap();
    assert!(text.starts_with(
        "epsilon,R,S,hs_norm_sq,coulomb,lp_norm_p,energy_norm,ratio,lemma_ratio"
    ));
    assert_eq!(text.lines().count(), 6);
    let summary: serde_json::Value = serde_json::from_slice(&summary1).unwrap();
    let slope = summary["measured_slope"].as_f64().unwrap();
    assert!((slope - (2.4 - 18.0 / 7.0)).abs() < 0.15);
    let manifest = std::fs::read_to_string(dir.path().join("sweep.csv.manifest.json")).unwrap();
    let m: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    assert_eq!(m["subcommand"], "sweep");
}

#[test]
fn sweep_short_eps_still_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.csv");
    let out = bin()
        .args(["sweep", "--s", "1", "--p", "2.4", "--eps", "0.1", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(path.exists());
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(summary["slope_unavailable"].is_string());
}

#[test]
fn verify_identities_passes() {
    let out = bin()
        .args(["verify", "--suite", "identities", "--tol", "1e-3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("coulomb-dual/gaussian"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_unknown_suite_exits_2() {
    let out = bin().args(["verify", "--suite", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exponents_table_and_figure_csv() {
    let out = bin().args(["exponents", "--s", "1"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["radial_endpoint"].as_f64().unwrap() - 18.0 / 7.0).abs() < 1e-12);
    assert_eq!(v["sobolev_endpoint"].as_f64().unwrap(), 6.0);

    let out = bin().args(["exponents", "--s", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let out = bin()
        .args(["exponents", "--figure1-csv", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 92); // header + 91 rows
}

#[test]
fn best_constant_endpoint_exits_2() {
    let out = bin()
        .args(["best-constant", "--s", "1", "--two-p", "6"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn best_constant_small_run_is_deterministic() {
    let run = || {
        let out = bin()
            .args([
                "best-constant", "--s", "1", "--two-p", "4",
                "--family", "gaussians:2", "--restarts", "2", "--max-iters", "40",
                "--seed", "42",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let a = run();
    let b = run();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert!(v["best_J"].as_f64().unwrap() >= 0.4466);
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"quad_rel_tol": 1e-6}"#).unwrap();
    // config alone applies; flag overrides config; bad config exits 2
    let out = bin()
        .args(["norms", "--profile", "builtin:gaussian", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args([
            "norms", "--profile", "builtin:gaussian",
            "--config", cfg.to_str().unwrap(), "--quad-rel-tol", "1e-9",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    std::fs::write(&cfg, r#"{"quad_rel_tol": "soon"}"#).unwrap();
    let out = bin()
        .args(["norms", "--profile", "builtin:gaussian", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
