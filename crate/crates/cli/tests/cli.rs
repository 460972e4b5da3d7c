use std::path::Path;
use std::process::{Command, Output};

use cvwerner_cli::format::fmt_sig;
use serde_json::Value;

fn cvwerner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvwerner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (headers, rows)
}

fn column(headers: &[String], name: &str) -> usize {
    headers
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn compute_examples() {
    let v = json(&cvwerner(&[
        "compute", "discord0", "--p", "0.5", "--lambda", "0.5",
    ]));
    assert!((v["results"]["discord"].as_f64().unwrap() - 0.224717).abs() < 1e-6);
    assert_eq!(v["units"], "nats");
    assert!(v["error_budget"]["truncation_tail"].is_number());

    let v = json(&cvwerner(&["compute", "ppt-bounds", "--lambda", "0.5"]));
    assert!((v["results"]["U"].as_f64().unwrap() - 0.346574).abs() < 1e-6);

    let v = json(&cvwerner(&[
        "compute", "region", "--mu", "0.8", "--p", "0.05",
    ]));
    assert_eq!(v["region"], "separable");
}

#[test]
fn exit_codes() {
    let out = cvwerner(&["compute", "nope", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("known measures"));

    let out = cvwerner(&["compute", "discord0", "--p", "1.5", "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(3));

    let out = cvwerner(&["sweep", "discord0", "--p", "0.5,1.5", "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(4));
    let (headers, rows) = read_csv(&String::from_utf8(out.stdout).unwrap());
    let err = column(&headers, "error");
    assert!(rows[0][err].is_empty());
    assert!(rows[1][err].contains("outside its domain"));

    let out = cvwerner(&[
        "sweep",
        "discord0",
        "--p",
        "0.5",
        "--lambda",
        "0.5",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(5));

    let file = tempfile::NamedTempFile::new().unwrap();
    let out = cvwerner(&[
        "figure",
        "fig-ppt",
        "--outdir",
        file.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn sweep_is_monotone_and_round_trips() {
    let out = cvwerner(&["sweep", "discord0", "--p", "0:1:0.01", "--lambda", "0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let (headers, rows) = read_csv(&text);
    assert_eq!(rows.len(), 101);
    assert_eq!(
        headers[..3],
        ["p", "lambda", "discord (nats)"].map(String::from)
    );
    let d = column(&headers, "discord (nats)");
    let values: Vec<f64> = rows.iter().map(|r| r[d].parse().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[1] >= w[0]));
    for row in &rows {
        for cell in row.iter().filter(|c| !c.is_empty()) {
            let x: f64 = cell.parse().unwrap();
            assert_eq!(&fmt_sig(x), cell);
        }
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let args = [
        "sweep", "bounds", "--p", "0:1:0.25", "--lambda", "0.3,0.6", "--mu", "0.5",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_cvwerner"))
            .args(args)
            .env("CVW_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cvw.conf");
    std::fs::write(&cfg, "# fixed cutoff\ncutoff = 30\neps_tail = 1e-10\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let base = [
        "compute", "bounds", "--p", "0.5", "--lambda", "0.3", "--mu", "0.2",
    ];
    let v = json(&cvwerner(&[&base[..], &["--config", cfg]].concat()));
    assert_eq!(v["cutoff"], 30);
    let v = json(&cvwerner(
        &[&base[..], &["--config", cfg, "--cutoff", "40"]].concat(),
    ));
    assert_eq!(v["cutoff"], 40);

    std::fs::write(dir.path().join("bad.conf"), "cutoff: 3\n").unwrap();
    let out = cvwerner(&[
        "--config",
        dir.path().join("bad.conf").to_str().unwrap(),
        "compute",
        "delta0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn monte_carlo_respects_seed() {
    let args = |seed: &'static str| {
        [
            "compute",
            "conditional-gaussian-mc",
            "--p",
            "0.5",
            "--lambda",
            "0.5",
            "--t",
            "1",
            "--phi",
            "0",
            "--seed",
            seed,
        ]
    };
    let a = json(&cvwerner(&args("11")))["results"].clone();
    let b = json(&cvwerner(&args("11")))["results"].clone();
    let c = json(&cvwerner(&args("12")))["results"].clone();
    assert_eq!(a, b);
    assert_ne!(a, c);
    let exact = json(&cvwerner(&[
        "compute",
        "conditional-gaussian",
        "--p",
        "0.5",
        "--lambda",
        "0.5",
        "--t",
        "1",
        "--phi",
        "0",
    ]))["results"]["conditional_entropy"]
        .as_f64()
        .unwrap();
    let mean = a["conditional_entropy"].as_f64().unwrap();
    let se = a["std_error"].as_f64().unwrap();
    assert!((mean - exact).abs() < 4.0 * se);
}

#[test]
fn ppt_figure_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let out = cvwerner(&[
        "figure",
        "fig-ppt",
        "--outdir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(Path::new(&dir.path().join("fig-ppt.py")).exists());
    let text = std::fs::read_to_string(dir.path().join("fig-ppt.csv")).unwrap();
    let (headers, rows) = read_csv(&text);
    assert_eq!(rows.len(), 100);
    let (l, u, c) = (
        column(&headers, "lambda"),
        column(&headers, "U (nats)"),
        column(&headers, "clipped (nats)"),
    );
    for row in &rows {
        let lambda: f64 = row[l].parse().unwrap();
        let upper: f64 = row[u].parse().unwrap();
        assert!((upper - lambda * std::f64::consts::LN_2).abs() < 1e-11);
        assert!(row[c].parse::<f64>().unwrap() <= upper);
    }
}

#[test]
fn bounds_mu4_figure_has_thresholds() {
    let dir = tempfile::tempdir().unwrap();
    let out = cvwerner(&[
        "figure",
        "fig-bounds-mu4",
        "--outdir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("fig-bounds-mu4-thresholds.csv")).unwrap();
    assert_eq!(text, "name,p\np_sep,0.0841995841996\np_PPT,0.19570363546\n");
    let (headers, rows) =
        read_csv(&std::fs::read_to_string(dir.path().join("fig-bounds-mu4.csv")).unwrap());
    assert_eq!(rows.len(), 201);
    let region = column(&headers, "region");
    assert_eq!(rows[10][region], "separable");
    assert_eq!(rows[30][region], "PPT-unknown");
    assert_eq!(rows[100][region], "entangled-nonPPT");
}
