//! End-to-end behaviour of the `lrk` binary: outputs, replay, precedence and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lrk(args: &[&str]) -> Output {
    lrk_with_env(args, &[])
}

fn lrk_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lrk"));
    cmd.args(args).env_remove("LRK_WORKERS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("failed to launch lrk")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path.as_ref())
        .unwrap_or_else(|e| panic!("{}: {e}", path.as_ref().display()))
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&read(dir.join("run-manifest.json"))).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn single_cycle_json_schema() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lrk(&[
        "otto",
        "--alpha",
        "1.5",
        "--mu-f",
        "1",
        "--L",
        "200",
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&read(tmp.path().join("cycle.json"))).unwrap();
    let lr = &doc["long_range"];
    assert_eq!(lr["cycle"], "otto");
    for key in ["Q", "W", "eta", "engine_valid"] {
        assert!(lr.get(key).is_some(), "missing {key}");
    }
    let (q_h, q_c, w) = (
        lr["Q"]["Q_h"].as_f64().unwrap(),
        lr["Q"]["Q_c"].as_f64().unwrap(),
        lr["W"].as_f64().unwrap(),
    );
    assert!((w - (q_h + q_c)).abs() <= 1e-12 * w.abs().max(1.0));
    assert_eq!(doc["short_range"]["alpha"], "inf");

    let out = lrk(&[
        "stirling",
        "--alpha",
        "2",
        "--mu-f",
        "0.5",
        "--L",
        "64",
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&read(tmp.path().join("cycle.json"))).unwrap();
    for key in ["Q_1", "Q_2", "Q_3", "Q_4", "Q_h"] {
        assert!(doc["long_range"]["Q"][key].is_number(), "missing {key}");
    }
}

#[test]
fn csv_layout() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lrk(&[
        "otto",
        "--alpha",
        "1.5",
        "--sweep-mu",
        "--L",
        "100",
        "--mu-ratio-grid",
        "0:1:11",
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = read(tmp.path().join("sweep.csv"));
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "mu_ratio,R_W,R_eta,dQ_rel,xi,engine_lr,engine_sr"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    // mu_f = mu_i does no work: the work and efficiency ratios are undefined,
    // the relative heat difference is not.
    let last: Vec<&str> = rows[10].split(',').collect();
    assert_eq!(last[0], "1.0000000000000000e0");
    assert_eq!(
        [last[1], last[2], last[4], last[5], last[6]],
        ["NaN", "NaN", "NaN", "0", "0"]
    );
    assert!(last[3].parse::<f64>().unwrap().is_finite());
    for row in &rows {
        for field in row.split(',').take(5) {
            assert!(field == "NaN" || field.parse::<f64>().is_ok(), "{field}");
        }
    }
}

#[test]
fn json_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lrk(&[
        "regions",
        "--alphas",
        "1.5",
        "--L",
        "64",
        "--mu-ratio-grid",
        "0:1:5",
        "--beta-ratio-grid",
        "0.25,0.5,0.75",
        "--format",
        "json",
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: Value =
        serde_json::from_str(&read(tmp.path().join("regions_alpha_1.5.json"))).unwrap();
    assert_eq!(
        doc["columns"],
        serde_json::json!(["mu_ratio", "beta_ratio", "enhanced"])
    );
    assert_eq!(doc["rows"].as_array().unwrap().len(), 15);
    assert!(!tmp.path().join("regions_alpha_1.5.csv").exists());
}

#[test]
fn manifest_replay_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let cases: [(&str, &[&str], &[&str]); 3] = [
        (
            "stirling",
            &[
                "--alpha",
                "1.05",
                "--sweep-mu",
                "--L",
                "128",
                "--beta-c",
                "0.05",
                "--mu-ratio-grid",
                "log:0.01:1:17",
            ],
            &["sweep.csv", "curves.csv"],
        ),
        (
            "sweep",
            &[
                "--cycle",
                "otto",
                "--L",
                "64",
                "--alpha-grid",
                "1.1,1.5,3",
                "--beta-ratio-grid",
                "open:4",
                "--mu-ratio-grid",
                "0:1:21",
            ],
            &["max_ratios.csv"],
        ),
        (
            "winding",
            &[
                "--alpha",
                "0.7",
                "--L",
                "40",
                "--mu-steps",
                "13",
                "--grid-density",
                "2000",
            ],
            &["winding.csv"],
        ),
    ];
    for (sub, args, files) in cases {
        let mut first = vec![sub];
        first.extend_from_slice(args);
        first.extend_from_slice(&["--out", s(&a)]);
        let out = lrk(&first);
        assert_eq!(code(&out), 0, "{sub}: {}", stderr(&out));
        let recorded = a.join("run-manifest.json");
        let out = lrk(&[sub, "--config", s(&recorded), "--out", s(&b)]);
        assert_eq!(code(&out), 0, "{sub} replay: {}", stderr(&out));
        for f in files {
            assert_eq!(read(a.join(f)), read(b.join(f)), "{sub}: {f} differs");
        }
        let (ma, mb) = (manifest(&a), manifest(&b));
        assert_eq!(ma["subcommand"], sub);
        assert_eq!(ma["outputs"], mb["outputs"]);
        let mut inputs_b = mb["inputs"].clone();
        inputs_b["out"] = ma["inputs"]["out"].clone();
        assert_eq!(ma["inputs"], inputs_b);
    }
}

#[test]
fn replay_with_another_subcommand_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lrk(&[
        "winding",
        "--alpha",
        "2",
        "--mu",
        "0.5",
        "--L",
        "20",
        "--grid-density",
        "1000",
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = lrk(&[
        "spectrum",
        "--config",
        s(&tmp.path().join("run-manifest.json")),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("winding"), "{}", stderr(&out));
}

#[test]
fn precedence_flags_env_file_defaults() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# medium\nL = 64\nbeta_c = 2.5\nworkers = 1\nalpha = 2\nmu_f = 1\n",
    )
    .unwrap();
    let out_dir = tmp.path().join("o");
    let base = ["otto", "--config", s(&cfg), "--out", s(&out_dir)];

    let out = lrk(&base);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let m = manifest(&out_dir);
    assert_eq!(m["inputs"]["L"], "64");
    assert_eq!(m["inputs"]["beta_c"], "2.5");
    assert_eq!(m["inputs"]["workers"], "1");
    assert_eq!(m["inputs"]["mu_i"], "2");

    let out = lrk_with_env(&base, &[("LRK_WORKERS", "3")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(manifest(&out_dir)["inputs"]["workers"], "3");

    let mut with_flags = base.to_vec();
    with_flags.extend_from_slice(&["--workers", "2", "--L", "32"]);
    let out = lrk_with_env(&with_flags, &[("LRK_WORKERS", "3")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let m = manifest(&out_dir);
    assert_eq!(m["inputs"]["workers"], "2");
    assert_eq!(m["inputs"]["L"], "32");
}

#[test]
fn worker_count_does_not_change_output() {
    let tmp = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for workers in ["1", "4"] {
        let dir = tmp.path().join(workers);
        let out = lrk_with_env(
            &[
                "regions",
                "--cycle",
                "stirling",
                "--alphas",
                "1.2,2",
                "--L",
                "128",
                "--mu-ratio-grid",
                "0:1:21",
                "--beta-ratio-grid",
                "open:9",
                "--out",
                s(&dir),
            ],
            &[("LRK_WORKERS", workers)],
        );
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        texts.push((
            read(dir.join("regions_alpha_1.2.csv")),
            read(dir.join("regions_alpha_2.csv")),
        ));
    }
    assert_eq!(texts[0], texts[1]);
}

#[test]
fn config_errors_exit_2_with_line_numbers() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("L = 64\n\nbeta_c = hot\nalpha = 2\n", ":3:"),
        ("L = 64\nmu_i 2\n", ":2:"),
        ("nonsense = 1\n", ":1:"),
        ("L = 63\nalpha = 2\nmu_f = 1\n", ":1:"),
        ("L = 64\nalpha = 2\nmu_f = 3\n", ":3:"),
    ];
    for (text, marker) in cases {
        let cfg = tmp.path().join("bad.cfg");
        std::fs::write(&cfg, text).unwrap();
        let out = lrk(&[
            "otto",
            "--config",
            s(&cfg),
            "--out",
            s(&tmp.path().join("o")),
        ]);
        assert_eq!(code(&out), 2, "{text:?}: {}", stderr(&out));
        assert!(stderr(&out).contains(marker), "{text:?}: {}", stderr(&out));
    }
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&lrk(&["otto", "--no-such-flag"])), 2);
    assert_eq!(code(&lrk(&["frobnicate"])), 2);
    assert_eq!(
        code(&lrk(&["otto", "--alpha", "1.5"])),
        2,
        "mu_f is required"
    );
    assert_eq!(
        code(&lrk(&["otto", "--alpha", "0.9", "--mu-f", "1"])),
        2,
        "alpha must exceed 1"
    );
    let tmp = tempfile::tempdir().unwrap();
    let out = lrk(&["reproduce-figure", "2", "--out", s(tmp.path())]);
    assert_eq!(code(&out), 2);
    assert!(!tmp.path().join("run-manifest.json").exists());
}

#[test]
fn numerical_failures_exit_3() {
    // mu_f = mu_i everywhere: no engine-valid point, so no optimum exists.
    let tmp = tempfile::tempdir().unwrap();
    let out = lrk(&[
        "optimal",
        "--L",
        "16",
        "--mu-ratio-grid",
        "1",
        "--alpha-grid",
        "1.5",
        "--beta-ratio-grid",
        "0.5",
        "--out",
        s(tmp.path()),
    ]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("insufficient"), "{}", stderr(&out));
}

#[test]
fn io_failures_exit_4() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = lrk(&[
        "winding",
        "--alpha",
        "2",
        "--mu",
        "0.5",
        "--L",
        "20",
        "--out",
        s(&blocker.join("sub")),
    ]);
    assert_eq!(code(&out), 4, "{}", stderr(&out));
}

#[test]
fn figure_panels_and_scripts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = lrk(&["reproduce-figure", "4", "--out", s(tmp.path())]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let m = manifest(tmp.path());
    let outputs: Vec<&str> = m["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let csvs: Vec<&&str> = outputs.iter().filter(|f| f.ends_with(".csv")).collect();
    assert_eq!(csvs.len(), 4, "{outputs:?}");
    for panel in ["a", "b", "c", "d"] {
        assert!(
            csvs.iter().any(|f| f.starts_with(&format!("fig4{panel}_"))),
            "{outputs:?}"
        );
    }
    for csv in csvs {
        let script = read(tmp.path().join(csv.replace(".csv", ".gp")));
        assert!(script.contains(&format!("'{csv}'")), "{script}");
        let header = read(tmp.path().join(csv))
            .lines()
            .next()
            .unwrap()
            .to_string();
        assert_eq!(
            header.split(',').count(),
            7,
            "mu_ratio plus six exponents: {header}"
        );
    }

    let out = lrk(&["reproduce-figure", "7", "--out", s(tmp.path())]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let m = manifest(tmp.path());
    let maps = m["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v.as_str().unwrap().ends_with(".csv"))
        .count();
    assert_eq!(maps, 6);
}
