use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_nonhom");

fn nonhom(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("NONHOM_SEED").output().unwrap()
}

fn field(out: &Output, key: &str) -> f64 {
    let text = String::from_utf8_lossy(&out.stdout);
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .unwrap()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn stderr_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

#[test]
fn solve_routes_agree() {
    let args = ["solve", "--alpha", "3", "--epsilon", "-0.5", "--c", "100", "--sigma2", "0"];
    let closed = nonhom(&args);
    let mut general_args = args.to_vec();
    general_args.push("--general");
    let general = nonhom(&general_args);
    assert!(closed.status.success() && general.status.success());
    let (a, b) = (field(&closed, "beta"), field(&general, "beta"));
    assert!((a - b).abs() <= 1e-8 * a, "{a} vs {b}");
    assert!(field(&closed, "eta") > 0.0);
    assert!(field(&closed, "residual").abs() < 1e-9);
}

#[test]
fn solve_noise_only_limit() {
    let out = nonhom(&["solve", "--alpha", "4", "--epsilon", "0", "--c", "1e-12", "--sigma2", "1"]);
    assert!(out.status.success());
    assert!((field(&out, "beta") - 1.0).abs() < 1e-9);
}

#[test]
fn solve_json_output() {
    let out = nonhom(&["solve", "--alpha", "4", "--epsilon", "0", "--c", "10", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["beta"].as_f64().unwrap() - 0.004418347716647622).abs() < 1e-8 * 0.0044);
    assert_eq!(v["method"], "closed-form");
}

#[test]
fn pole_is_invalid_parameter() {
    let out = nonhom(&["solve", "--alpha", "2.5", "--epsilon", "0.5", "--c", "10", "--sigma2", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "PoleError");
    assert_eq!(err["error"]["exit_code"], 2);
}

#[test]
fn non_convergence_exit_code() {
    let out = nonhom(&["solve", "--alpha", "4", "--epsilon", "0", "--c", "1", "--sigma2", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["kind"], "NoFiniteRoot");
}

#[test]
fn approx_reference_point() {
    let out = nonhom(&["approx", "--alpha", "4", "--epsilon", "0", "--rho", "0.01", "--rt", "10", "--antennas", "10"]);
    assert!(out.status.success());
    assert!((field(&out, "spec_eff") - 2.352).abs() < 5e-4);
    let sinr = field(&out, "sinr");
    assert!((field(&out, "sinr_db") - 10.0 * sinr.log10()).abs() < 1e-12);
}

#[test]
fn approx_rejects_alpha_below_critical() {
    let out = nonhom(&["approx", "--alpha", "2.5", "--epsilon", "1", "--antennas", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "DomainError");
}

#[test]
fn plan_then_approx_roundtrip() {
    for gamma in ["0.5", "1", "2", "4"] {
        let plan = nonhom(&["plan", "--gamma", gamma, "--alpha", "3.5", "--epsilon", "-0.25", "--rho", "0.02", "--rt", "5"]);
        assert!(plan.status.success());
        let n = field(&plan, "antennas");
        assert_eq!(field(&plan, "antennas_ceil"), n.ceil());
        let approx = nonhom(&[
            "approx", "--alpha", "3.5", "--epsilon", "-0.25", "--rho", "0.02", "--rt", "5", "--antennas", &n.to_string(),
        ]);
        let g: f64 = gamma.parse().unwrap();
        assert!((field(&approx, "spec_eff") - g).abs() <= 1e-9 * g);
    }
}

#[test]
fn plan_grows_with_epsilon() {
    let n = |eps: &str| field(&nonhom(&["plan", "--gamma", "1", "--alpha", "3", "--epsilon", eps]), "antennas");
    assert!(n("0") > n("-1"));
}

fn simulate_trials(dir: &Path, trials: &str, extra: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut args = vec![
        "simulate", "--alpha", "3", "--epsilon", "-0.5", "--n-nodes", "300", "--antennas", "2,4,8", "--trials", trials,
        "--seed", "9", "--out", out,
    ];
    args.extend_from_slice(extra);
    nonhom(&args)
}

fn simulate(dir: &Path, extra: &[&str]) -> Output {
    simulate_trials(dir, "3", extra)
}

#[test]
fn simulate_files_and_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate_trials(dir.path(), "1", &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let (header, rows) = read_csv(&dir.path().join("trials.csv"));
    assert_eq!(header, ["N", "trial", "sinr", "beta_n", "eta_n", "spec_eff"]);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        for v in &row[2..] {
            // 17 significant digits, and lossless.
            let mantissa = v.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{v}");
            let x: f64 = v.parse().unwrap();
            assert_eq!(&format!("{x:.16e}"), v);
        }
    }

    let (header, rows) = read_csv(&dir.path().join("summary.csv"));
    assert_eq!(header, ["N", "mean_se", "std_se", "mean_eta", "std_eta", "q05", "q50", "q95", "asym_se", "rel_err"]);
    assert_eq!(rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(), ["2", "4", "8"]);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["master_seed"], 9);
    assert_eq!(manifest["config"]["trials"], 1);
    assert_eq!(manifest["config"]["antennas"], serde_json::json!([2, 4, 8]));
    assert!(manifest["version"].is_string() && manifest["timestamp"].is_u64());
}

#[test]
fn simulate_json_format() {
    let dir = tempfile::tempdir().unwrap();
    assert!(simulate(dir.path(), &["--format", "json"]).status.success());
    let trials: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("trials.json")).unwrap()).unwrap();
    assert_eq!(trials["trials"].as_array().unwrap().len(), 9);
    assert!(trials["trials"][0]["eta_n"].is_f64());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["summary"][2]["N"], 8);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# reference point\nalpha = 4\nepsilon = -0.5\nn_nodes = 200\nantennas = 2,4\ntrials = 2\nseed = 1\n",
    )
    .unwrap();
    let out_dir = dir.path().join("o");
    let out = nonhom(&["simulate", "--config", cfg.to_str().unwrap(), "--trials", "3", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&out_dir.join("trials.csv"));
    assert_eq!(rows.len(), 6);

    std::fs::write(&cfg, "alpha = 4\nbogus = 1\n").unwrap();
    let out = nonhom(&["simulate", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_environment_override() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(simulate(a.path(), &[]).status.success());
    let out = Command::new(BIN)
        .args(["simulate", "--alpha", "3", "--epsilon", "-0.5", "--n-nodes", "300", "--antennas", "2,4,8"])
        .args(["--trials", "3", "--seed", "9", "--out", b.path().to_str().unwrap()])
        .env("NONHOM_SEED", "10")
        .output()
        .unwrap();
    assert!(out.status.success());
    let ta = std::fs::read(a.path().join("trials.csv")).unwrap();
    let tb = std::fs::read(b.path().join("trials.csv")).unwrap();
    assert_ne!(ta, tb);
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(b.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["master_seed"], 10);
}

#[test]
fn simulate_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = simulate(&blocker.join("sub"), &[]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_json(&out)["error"]["kind"], "Io");

    assert_eq!(simulate(dir.path(), &["--antennas", "8,4"]).status.code(), Some(2));
    assert_eq!(simulate(dir.path(), &["--noise", "0"]).status.code(), Some(2));
    assert_eq!(simulate(dir.path(), &["--channel", "rician"]).status.code(), Some(2));
    assert_eq!(nonhom(&["simulate", "--epsilon", "0"]).status.code(), Some(2));
}

#[test]
fn figures_unknown_id() {
    let dir = tempfile::tempdir().unwrap();
    let out = nonhom(&["figures", "--figure", "7", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["kind"], "InvalidParameter");
}

#[test]
fn figure_two_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = nonhom(&["figures", "--figure", "2", "--n-nodes", "300", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("fig2.csv"));
    assert_eq!(header, ["series", "alpha", "epsilon", "N", "trial", "eta_n"]);
    assert_eq!(rows.len(), 5 * 50 + 5);
    assert_eq!(rows.iter().filter(|r| r[0] == "sample").count(), 250);
    let trials: Vec<usize> = rows.iter().filter(|r| r[0] == "sample" && r[3] == "8").map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(trials, (0..50).collect::<Vec<_>>());
}

#[test]
fn figure_six_columns_increase() {
    let dir = tempfile::tempdir().unwrap();
    let out = nonhom(&["figures", "--figure", "6", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("fig6.csv"));
    assert_eq!(header, ["epsilon", "N_gamma_1", "N_gamma_2", "N_gamma_3"]);
    assert_eq!(rows.len(), 21);
    for col in 1..4 {
        let v: Vec<f64> = rows.iter().map(|r| r[col].parse().unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }
}

#[test]
fn figure_mean_curves_use_reference_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = nonhom(&[
        "figures", "--figure", "3", "--n-nodes", "200", "--trials", "2", "--antennas", "4,8", "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (_, rows) = read_csv(&dir.path().join("fig3.csv"));
    let alphas: Vec<f64> = rows.iter().step_by(2).map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(alphas, [2.5, 3.0, 3.5, 4.0, 4.5]);
    assert!(rows.iter().all(|r| r[1].parse::<f64>().unwrap() == -0.5));
}
