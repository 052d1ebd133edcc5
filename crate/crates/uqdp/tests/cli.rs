use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use uqdp::output::{RunRecord, Table};

fn uqdp(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_uqdp"));
    c.args(args).env_remove("UQDP_SEED");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("uqdp starts")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL_UX: &str = "experiment = \"gate-ux\"\n[noise]\neta_points = 3\n[ensemble]\nn = 100\n";

#[test]
fn run_writes_csv_and_record() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "ux.toml", SMALL_UX);
    let out = dir.path().join("out");
    let o = uqdp(&["run", s(&cfg), "--out", s(&out), "-q", "--set", "model.em_over_ez=[0.2, 0.4, 0.6]"], &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read_csv(&out.join("results.csv")).unwrap();
    assert_eq!(t.rows.len(), 9);
    assert_eq!(
        t.header,
        ["index", "Em/Ez [1]", "eta [rad]", "F_X [1]", "F_X_se [1]", "trace_defect [1]", "duration [s]", "error"]
    );
    for f in t.numbers("F_X [1]").unwrap() {
        assert!(f > 0.99 && f <= 1.0, "{f}");
    }
    let rec = RunRecord::read(&out.join("results.json")).unwrap();
    assert_eq!(rec.points.len(), 9);
    assert_eq!(rec.config.ensemble.n, 100);
    assert!(rec.points.iter().all(|p| p.error.is_none()));
}

#[test]
fn rerunning_a_record_reproduces_the_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "ux.toml", SMALL_UX);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(uqdp(&["run", s(&cfg), "--out", s(&a), "-q"], &[]).status.success());
    let rec = a.join("results.json");
    let o = uqdp(&["run", s(&rec), "--out", s(&b), "-q", "--threads", "2"], &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        std::fs::read(a.join("results.csv")).unwrap(),
        std::fs::read(b.join("results.csv")).unwrap()
    );
}

#[test]
fn seed_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "ux.toml", "experiment = \"gate-ux\"\n[noise]\neta = [1.0]\n[ensemble]\nn = 100\n");
    let run = |sub: &str, seed: &str| {
        let out = dir.path().join(sub);
        let o = uqdp(&["run", s(&cfg), "--out", s(&out), "-q"], &[("UQDP_SEED", seed)]);
        assert!(o.status.success(), "{}", stderr(&o));
        (
            std::fs::read(out.join("results.csv")).unwrap(),
            RunRecord::read(&out.join("results.json")).unwrap().base_seed,
        )
    };
    let (a, sa) = run("a", "7");
    let (b, _) = run("b", "7");
    let (c, sc) = run("c", "8");
    assert_eq!((sa, sc), (7, 8));
    assert_eq!(a, b);
    assert_ne!(a, c);
    let o = uqdp(&["validate", s(&cfg)], &[("UQDP_SEED", "seven")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn silent_noise_reports_lower_bounds() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "d.toml",
        "experiment = \"dephasing\"\n[noise]\namplitude_over_ez = 0.0\neta_points = 2\n[ensemble]\nn = 100\n",
    );
    let out = dir.path().join("out");
    let o = uqdp(&["run", s(&cfg), "--out", s(&out), "-q"], &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read_csv(&out.join("results.csv")).unwrap();
    let lb = t.column("lower_bound").unwrap();
    assert!(t.rows.iter().all(|r| r[lb] == "true"));
    let horizon = t.numbers("horizon [s]").unwrap();
    assert_eq!(t.numbers("T_phi [s]").unwrap(), horizon);
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let unknown = write(&dir, "u.toml", "experiment = \"gate-ux\"\n[noise]\nbogus = 1\n");
    let o = uqdp(&["validate", s(&unknown)], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bogus"), "{}", stderr(&o));

    let bad = write(&dir, "b.toml", "experiment = \"gate-ux\"\n[numerics]\ndt_fraction = 0.1\n");
    let o = uqdp(&["run", s(&bad), "-q", "--out", s(dir.path())], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("numerics.dt_fraction"), "{}", stderr(&o));

    let o = uqdp(&["run", s(&dir.path().join("missing.toml"))], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_three() {
    // a drive far outside the rotating-wave regime at the coarsest admissible
    // step drifts past the norm tolerance
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "coarse.toml",
        "experiment = \"gate-ux\"\n[model]\nlambda_ghz = 8.0\n[noise]\neta = [0.5]\n[ensemble]\nn = 100\n[numerics]\ndt_fraction = 0.025\n",
    );
    let out = dir.path().join("out");
    let o = uqdp(&["run", s(&cfg), "--out", s(&out), "-q"], &[]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("grid point 0"), "{}", stderr(&o));
    let t = Table::read_csv(&out.join("results.csv")).unwrap();
    let e = t.column("error").unwrap();
    assert_eq!(t.rows[0][e], "norm-drift");
    assert_eq!(t.rows[0][t.column("F_X [1]").unwrap()], "");
}

#[test]
fn validate_shows_the_step_plan() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "ux.toml", SMALL_UX);
    let o = uqdp(&["validate", s(&cfg)], &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("segment 0"), "{text}");
    assert!(text.contains("1/40 of the fastest period"), "{text}");
    let strong = write(&dir, "s.toml", "experiment = \"gate-ux\"\n[model]\nlambda_ghz = 2.0\n");
    let text = String::from_utf8_lossy(&uqdp(&["validate", s(&strong)], &[]).stdout).into_owned();
    assert!(text.contains("rotating-wave"), "{text}");
}

#[test]
fn exports_figures_from_records() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "uc.toml",
        "experiment = \"gate-uc\"\n[model]\necc_mhz = [0.0, 50.0]\n[noise]\neta = [0.0, 1.5707963267948966]\n[ensemble]\nn = 100\n",
    );
    let out = dir.path().join("out");
    let o = uqdp(&["run", s(&cfg), "--out", s(&out), "-q"], &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rec = out.join("results.json");

    let fig = dir.path().join("fig3d.csv");
    let o = uqdp(&["export", s(&rec), "--figure", "fig3d", "--out", s(&fig)], &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read_csv(&fig).unwrap();
    assert_eq!(t.header, ["x [rad]", "series", "value [1]", "stderr [1]"]);
    assert_eq!(t.rows.len(), 4);
    let series = t.column("series").unwrap();
    let mut labels: Vec<&str> = t.rows.iter().map(|r| r[series].as_str()).collect();
    labels.dedup();
    assert_eq!(labels.len(), 2);

    let o = uqdp(&["export", s(&rec), "--figure", "fig3c"], &[]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 3);

    let o = uqdp(&["export", s(&rec), "--figure", "fig1"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn trajectory_dump() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "ux.toml", SMALL_UX);
    let out = dir.path().join("tr.csv");
    let o = uqdp(
        &["trajectory", s(&cfg), "--channel", "z2", "--samples", "50", "--out", s(&out)],
        &[],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let t = Table::read_csv(&out).unwrap();
    assert_eq!(t.header, ["t [s]", "value [rad/s]"]);
    assert_eq!(t.rows.len(), 50);
    let o = uqdp(&["trajectory", s(&cfg), "--channel", "q9"], &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_columns_are_named() {
    let t = Table {
        header: vec!["a".into()],
        rows: vec![],
    };
    let e = t.column("b").unwrap_err();
    assert_eq!(e.to_string(), "column `b` is missing from the record");
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut n = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "toml") {
            let o = uqdp(&["validate", s(&p)], &[]);
            assert!(o.status.success(), "{}: {}", p.display(), stderr(&o));
            n += 1;
        }
    }
    assert!(n >= 7);
}
