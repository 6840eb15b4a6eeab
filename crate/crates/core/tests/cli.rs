use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ermakov_susy::cli::{preset, RunConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ermakov-susy"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn read_csv(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn repo_file(rel: &str) -> String {
    format!("{}/../../{rel}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn fig1_imaginary_part_is_odd() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["preset", "fig1", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("potential.csv"));
    assert_eq!(header, "x,re_v0,re_v1,im_v1");
    let n = rows.len();
    assert_eq!(n, 2001);
    let peak = rows.iter().map(|r| r[3].abs()).fold(0.0, f64::max);
    assert!(peak > 0.1);
    for i in 0..n {
        let j = n - 1 - i;
        assert!((rows[i][0] + rows[j][0]).abs() < 1e-12);
        assert!((rows[i][3] + rows[j][3]).abs() <= 1e-8, "x = {}", rows[i][0]);
        assert!((rows[i][2] - rows[j][2]).abs() <= 1e-8);
    }
    for name in ["spectrum.csv", "state_0.csv", "diagnostics.csv", "summary.txt"] {
        assert!(dir.path().join(name).exists(), "{name}");
    }
}

#[test]
fn fig3_spectrum_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["preset", "fig3", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("spectrum.csv"));
    assert_eq!(header, "index,re_E,im_E,residual");
    let levels: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(levels.len(), 3);
    for (e, want) in levels.iter().zip([1.0, 1.75, 3.75]) {
        assert!((e - want).abs() <= 2e-3, "{levels:?}");
    }
    assert!(rows.iter().all(|r| r[2].abs() <= 1e-6 && r[3] <= 1e-8));
    // one mapped state per H0 level plus the missing state
    for k in 0..3 {
        let (h, psi) = read_csv(&dir.path().join(format!("state_{k}.csv")));
        assert_eq!(h, "x,re_psi,im_psi,abs_psi");
        assert_eq!(psi.len(), 2001);
    }
    let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.contains("not symmetric"), "{summary}");
    assert!(summary.contains("derived from b^2 - 4ac"));
}

#[test]
fn infeasible_constraint_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = preset("fig3").unwrap();
    cfg.a = 0.5;
    cfg.c = 0.5;
    let path = dir.path().join("bad.toml");
    fs::write(&path, cfg.to_toml().unwrap()).unwrap();
    let out = run(&["run", path.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("infeasible"), "{err}");
    assert!(!dir.path().join("potential.csv").exists());
}

#[test]
fn violated_b_exits_2_naming_the_relation() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = preset("fig1").unwrap();
    cfg.b = Some(0.5);
    let path = dir.path().join("bad.toml");
    fs::write(&path, cfg.to_toml().unwrap()).unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b^2 - 4ac = -4 lambda^2 / w0^2"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.toml");
    fs::write(&path, "epsilon = 1\nlambda = \"two\"\n").unwrap();
    assert_eq!(run(&["run", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["run", dir.path().join("missing.toml").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["preset", "fig2", "--emit-config"]).status.code(), Some(2));
}

#[test]
fn emitted_presets_round_trip() {
    for name in ["fig1", "fig1-shifted", "fig3", "fig3-alt"] {
        let out = run(&["preset", name, "--emit-config"]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        let parsed = RunConfig::from_toml(&text).unwrap();
        assert_eq!(parsed, preset(name).unwrap());
        assert_eq!(parsed.to_toml().unwrap(), text);
    }
}

#[test]
fn outputs_are_deterministic_and_match_preset() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = a.path().join("fig1-shifted.toml");
    let emitted = run(&["preset", "fig1-shifted", "--emit-config"]).stdout;
    fs::write(&cfg, emitted).unwrap();
    assert_eq!(run(&["preset", "fig1-shifted", "--out-dir", a.path().to_str().unwrap()]).status.code(), Some(0));
    assert_eq!(
        run(&["run", cfg.to_str().unwrap(), "--out-dir", b.path().to_str().unwrap()]).status.code(),
        Some(0)
    );
    for name in ["potential.csv", "spectrum.csv", "state_0.csv", "diagnostics.csv", "summary.txt"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name} differs between runs");
    }
}

#[test]
fn verify_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .current_dir(dir.path())
        .args(["verify", &repo_file("configs/poschl_teller.toml")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("all checks passed"));
    assert!(stdout.contains("PT symmetry: symmetric"));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn custom_samples_and_output_selection() {
    let dir = tempfile::tempdir().unwrap();
    let mut samples = String::from("x,V\n");
    for i in 0..2001 {
        let x = -20.0 + 0.02 * i as f64;
        samples.push_str(&format!("{x},{}\n", -6.0 / x.cosh().powi(2)));
    }
    fs::write(dir.path().join("well.csv"), samples).unwrap();
    let cfg = "epsilon = -6.25\nlambda = 1.0\na = 1.0\nc = 2.0\noutputs = [\"spectrum\"]\n\
               [model]\nkind = \"custom\"\nsamples = \"well.csv\"\n";
    let path = dir.path().join("well.toml");
    fs::write(&path, cfg).unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&["run", path.to_str().unwrap(), "--out-dir", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let mut files: Vec<String> =
        fs::read_dir(&out_dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    files.sort();
    assert_eq!(files, ["spectrum.csv", "summary.txt"]);
    let (_, rows) = read_csv(&out_dir.join("spectrum.csv"));
    let levels: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    assert_eq!(levels.len(), 3);
    for (e, want) in levels.iter().zip([-6.25, -4.0, -1.0]) {
        assert!((e - want).abs() <= 1e-3, "{levels:?}");
    }
}

#[test]
fn failed_check_exits_1() {
    // too coarse a grid for the seed residual tolerance
    let dir = tempfile::tempdir().unwrap();
    let cfg = "epsilon = -6.25\nlambda = 1.0\na = 1.0\nc = 1.0\noutputs = []\n\
               [model]\nkind = \"custom\"\nexpression = \"-24/(exp(x) + exp(-x))^2\"\n\
               [grid]\nx_min = -20.0\nx_max = 20.0\nn = 401\n";
    let path = dir.path().join("coarse.toml");
    fs::write(&path, cfg).unwrap();
    let out = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("check failed: seed_schrodinger"));
}
